import numpy as np
import pytest

from hardylab import _backend, _core_py
from hardylab.optimize import product_rows

from conftest import random_hermitian, random_ket

try:
    from hardylab import _core
except ImportError:  # extension not built
    _core = None

BACKENDS = [_core_py] + ([_core] if _core is not None else [])


def test_backend_name():
    assert _backend.BACKEND in ("cython", "python")


def test_compiled_backend_is_default_when_built():
    if _core is None:
        pytest.skip("compiled extension not built")
    assert _backend.BACKEND == "cython"


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.NAME)
def test_jacobi(mod, rng):
    for d in (1, 2, 4, 9):
        h = random_hermitian(rng, d)
        w, v = mod.jacobi_eigh(h, 1e-12, 64)
        assert np.allclose(w, np.linalg.eigvalsh(h), atol=1e-10)
        assert np.allclose(h @ v, v * w, atol=1e-9)


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.NAME)
def test_orthonormalize_drops_dependent_rows(mod, rng):
    a, b = random_ket(rng, 4), random_ket(rng, 4)
    q = mod.orthonormalize(np.array([a, b, a - 3j * b]), 1e-10)
    assert q.shape == (2, 4)
    assert np.allclose(q @ q.conj().T, np.eye(2))


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.NAME)
def test_constrained_max_against_dense_oracle(mod, rng):
    for _ in range(20):
        cols = [np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))[0] for _ in range(4)]
        zero = np.vstack([product_rows(cols[0][:, :1], cols[1][:, 1:]), product_rows(cols[2][:, 2:], cols[3][:, :2])])
        target = product_rows(cols[0][:, 1:], cols[1][:, :1])
        # oracle: top eigenvalue of T on the kernel, via scipy-free dense algebra
        _, s, vh = np.linalg.svd(zero)
        kernel = vh[np.sum(s > 1e-10):]  # <r|psi> = 0 for every zero row r
        t = target.T @ target.conj()
        ref = np.linalg.eigvalsh(kernel.conj() @ t @ kernel.T)[-1]
        assert np.isclose(mod.constrained_max(zero, target, 1e-10), ref, atol=1e-10)


def test_backends_agree(rng):
    if _core is None:
        pytest.skip("compiled extension not built")
    h = random_hermitian(rng, 6)
    assert np.allclose(_core.jacobi_eigh(h, 1e-12, 64)[0], _core_py.jacobi_eigh(h, 1e-12, 64)[0], atol=1e-12)
