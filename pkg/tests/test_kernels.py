"""Backend agreement: compiled kernels against the numpy fallback."""

import os
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from tslattice._kernels import BACKEND, _pykernels, available_backends

try:
    from tslattice._kernels import _cykernels
except ImportError:
    _cykernels = None

needs_cython = pytest.mark.skipif(_cykernels is None, reason="compiled kernels not built")


def random_vec(n, rng):
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return v / np.linalg.norm(v)


def random_matrix(dim, rng):
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


@needs_cython
def test_apply_1q_backends_agree():
    rng = np.random.default_rng(0)
    for n in (1, 2, 5, 8):
        v = random_vec(n, rng)
        m = random_matrix(2, rng)
        for site in range(n):
            assert_allclose(
                _cykernels.apply_1q(v, m, site, n),
                _pykernels.apply_1q(v, m, site, n),
                atol=1e-14,
            )


@needs_cython
def test_apply_2q_backends_agree():
    rng = np.random.default_rng(1)
    for n in (2, 4, 7):
        v = random_vec(n, rng)
        m = random_matrix(4, rng)
        pairs = [(0, 1), (n - 1, 0), (1, n - 1)]
        for a, b in pairs:
            if a == b:
                continue
            assert_allclose(
                _cykernels.apply_2q(v, m, a, b, n),
                _pykernels.apply_2q(v, m, a, b, n),
                atol=1e-14,
            )


@needs_cython
def test_expect_1q_backends_agree():
    rng = np.random.default_rng(2)
    for n in (1, 3, 6):
        v = random_vec(n, rng)
        h = random_matrix(2, rng)
        h = h + h.conj().T
        for site in range(n):
            a = _cykernels.expect_1q(v, h, site, n)
            b = _pykernels.expect_1q(v, h, site, n)
            assert a == pytest.approx(b, abs=1e-13)


def test_pykernel_ordering_convention():
    # site 0 is the MSB: X on site 0 of |00> lands on index 0b10
    v = np.zeros(4, dtype=complex)
    v[0] = 1.0
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    out = _pykernels.apply_1q(v, x, 0, 2)
    assert np.argmax(np.abs(out)) == 0b10
    out = _pykernels.apply_1q(v, x, 1, 2)
    assert np.argmax(np.abs(out)) == 0b01


def test_backend_is_reported():
    assert BACKEND in ("cython", "python")
    assert "python" in available_backends()


def test_env_var_forces_python_backend():
    code = "import tslattice._kernels as k; print(k.BACKEND)"
    env = dict(os.environ, TSLATTICE_KERNELS="python")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "python"


def test_env_var_rejects_unknown_backend():
    code = "import tslattice._kernels"
    env = dict(os.environ, TSLATTICE_KERNELS="fortran")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.returncode != 0
