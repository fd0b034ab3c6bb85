"""Compiled kernels against the numpy fallback."""
import numpy as np
import pytest

from qdhmc import _backend
from qdhmc._fallback import evolve_inplace as py_evolve
from qdhmc._fallback import kinetic_inplace as py_kinetic
from qdhmc.grid import RegisterSpec
from qdhmc.spectral import kinetic_multipliers

cy = pytest.importorskip("qdhmc._kernels", reason="compiled extension not built")


def _psi(size, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return v / np.linalg.norm(v)


@pytest.mark.parametrize("d,n", [(1, 1), (2, 1), (5, 1), (10, 1), (3, 2), (6, 2), (3, 3)])
def test_kinetic_matches(d, n):
    spec = RegisterSpec(d, n)
    kin = kinetic_multipliers(spec, 0.83)
    a = _psi(spec.size, d * 10 + n)
    b = a.copy()
    py_kinetic(a, n, spec.points_per_dim, kin)
    cy.kinetic_inplace(b, n, spec.points_per_dim, kin)
    np.testing.assert_allclose(b, a, atol=1e-12)


@pytest.mark.parametrize("d,n,steps", [(4, 1, 1), (5, 2, 7), (8, 1, 20)])
def test_evolve_matches(d, n, steps):
    spec = RegisterSpec(d, n)
    rng = np.random.default_rng(steps)
    pot = np.exp(-1j * rng.uniform(0, 3, spec.size))
    kin = kinetic_multipliers(spec, 0.4)
    a = _psi(spec.size, steps)
    b = a.copy()
    py_evolve(a, n, spec.points_per_dim, pot, kin, steps)
    cy.evolve_inplace(b, n, spec.points_per_dim, pot, kin, steps)
    np.testing.assert_allclose(b, a, atol=1e-11)


@pytest.mark.parametrize("impl", ["cython", "python"])
@pytest.mark.parametrize("psi,n,N,kin", [
    (np.zeros(8, complex), 1, 8, np.ones(4, complex)),
    (np.zeros(8, complex), 2, 8, np.ones(8, complex)),
    (np.zeros(6, complex), 1, 6, np.ones(6, complex)),
    (np.zeros(8), 1, 8, np.ones(8, complex)),
])
def test_kernels_reject_bad_shapes(impl, psi, n, N, kin):
    mod = cy if impl == "cython" else _backend._fallback
    with pytest.raises((ValueError, TypeError)):
        mod.kinetic_inplace(psi, n, N, kin)
    with pytest.raises((ValueError, TypeError)):
        mod.evolve_inplace(psi, n, N, np.ones(psi.shape[0], complex), kin, 1)


def test_backend_selection_reported():
    assert _backend.BACKEND in ("cython", "python")
    assert _backend.kernels is (cy if _backend.BACKEND == "cython" else _backend._fallback)


def test_pure_python_env_forces_fallback():
    import subprocess
    import sys

    code = "import qdhmc; print(qdhmc.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={**__import__("os").environ, "QDHMC_PURE_PYTHON": "1"}, check=True)
    assert out.stdout.strip() == "python"
