"""Pure-numpy gate kernels (fallback backend).

Site 0 is the most significant bit of the basis index, so axis ``k`` of
``amps.reshape((2,) * n)`` is site ``k``.
"""

import numpy as np


def apply_1q(amps, m, site, n):
    """Apply a 2x2 matrix to one tensor factor of a 2^n amplitude vector."""
    t = np.moveaxis(amps.reshape((2,) * n), site, 0).reshape(2, -1)
    out = m @ t
    return np.moveaxis(out.reshape((2,) * n), 0, site).ravel()


def apply_2q(amps, m, site_a, site_b, n):
    """Apply a 4x4 matrix to sites (a, b); row index is (bit_a << 1) | bit_b."""
    t = np.moveaxis(amps.reshape((2,) * n), (site_a, site_b), (0, 1)).reshape(4, -1)
    out = m @ t
    return np.moveaxis(out.reshape((2,) * n), (0, 1), (site_a, site_b)).ravel()


def expect_1q(amps, m, site, n):
    """Raw inner product <psi| m_site |psi>, returned as a complex number."""
    t = np.moveaxis(amps.reshape((2,) * n), site, 0).reshape(2, -1)
    return complex(np.einsum("ar,ab,br->", t.conj(), m, t))
