# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled gate kernels: bit-stride loops over contiguous complex128 arrays.

Same contracts as the pure-numpy backend. Site 0 is the most significant bit,
so the stride of site ``k`` in a 2^n vector is ``2^(n-1-k)``.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def apply_1q(amps, m, Py_ssize_t site, Py_ssize_t n):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] g = np.ascontiguousarray(m, dtype=np.complex128)
    cdef Py_ssize_t dim = a.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(dim, dtype=np.complex128)
    cdef Py_ssize_t stride = 1 << (n - 1 - site)
    cdef Py_ssize_t block, off, i0, i1
    cdef double complex m00 = g[0, 0], m01 = g[0, 1], m10 = g[1, 0], m11 = g[1, 1]
    cdef double complex a0, a1
    for block in range(0, dim, 2 * stride):
        for off in range(block, block + stride):
            i0 = off
            i1 = off + stride
            a0 = a[i0]
            a1 = a[i1]
            out[i0] = m00 * a0 + m01 * a1
            out[i1] = m10 * a0 + m11 * a1
    return out


def apply_2q(amps, m, Py_ssize_t site_a, Py_ssize_t site_b, Py_ssize_t n):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] g = np.ascontiguousarray(m, dtype=np.complex128)
    cdef Py_ssize_t dim = a.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(dim, dtype=np.complex128)
    cdef Py_ssize_t sa = 1 << (n - 1 - site_a)
    cdef Py_ssize_t sb = 1 << (n - 1 - site_b)
    cdef Py_ssize_t i, i00, i01, i10, i11
    cdef double complex a00, a01, a10, a11
    for i in range(dim):
        if (i & sa) == 0 and (i & sb) == 0:
            i00 = i
            i01 = i + sb
            i10 = i + sa
            i11 = i + sa + sb
            a00 = a[i00]
            a01 = a[i01]
            a10 = a[i10]
            a11 = a[i11]
            out[i00] = g[0, 0] * a00 + g[0, 1] * a01 + g[0, 2] * a10 + g[0, 3] * a11
            out[i01] = g[1, 0] * a00 + g[1, 1] * a01 + g[1, 2] * a10 + g[1, 3] * a11
            out[i10] = g[2, 0] * a00 + g[2, 1] * a01 + g[2, 2] * a10 + g[2, 3] * a11
            out[i11] = g[3, 0] * a00 + g[3, 1] * a01 + g[3, 2] * a10 + g[3, 3] * a11
    return out


def expect_1q(amps, m, Py_ssize_t site, Py_ssize_t n):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] g = np.ascontiguousarray(m, dtype=np.complex128)
    cdef Py_ssize_t dim = a.shape[0]
    cdef Py_ssize_t stride = 1 << (n - 1 - site)
    cdef Py_ssize_t block, off, i0, i1
    cdef double complex m00 = g[0, 0], m01 = g[0, 1], m10 = g[1, 0], m11 = g[1, 1]
    cdef double complex acc = 0
    cdef double complex a0, a1
    for block in range(0, dim, 2 * stride):
        for off in range(block, block + stride):
            i0 = off
            i1 = off + stride
            a0 = a[i0]
            a1 = a[i1]
            acc = acc + a0.conjugate() * (m00 * a0 + m01 * a1)
            acc = acc + a1.conjugate() * (m10 * a0 + m11 * a1)
    return complex(acc)
