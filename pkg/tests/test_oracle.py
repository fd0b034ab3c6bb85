import numpy as np
import pytest

from qdhmc import oracle
from qdhmc.dynamics import ScheduleSampler, TrotterSchedule, sample_schedule
from qdhmc.errors import SizeGuardError
from qdhmc.grid import RegisterSpec
from qdhmc.targets import Target, make_target


def test_position_operator_d2():
    c = np.sqrt(2 * np.pi / 4)
    np.testing.assert_allclose(oracle.dense_position(RegisterSpec(2)), np.diag([-2 * c, -c, 0, c]))


def test_position_embedding_2d():
    spec = RegisterSpec(2, 2)
    x1 = oracle.dense_position(spec, 1)
    c = spec.spacing
    np.testing.assert_allclose(np.diag(x1), np.tile([-2 * c, -c, 0, c], 4))


def test_size_guard():
    with pytest.raises(SizeGuardError):
        oracle.dense_position(RegisterSpec(7, 2))
    with pytest.raises(SizeGuardError):
        oracle.exact_grid_boltzmann(RegisterSpec(13), make_target("gaussian", 1))
    oracle.dense_position(RegisterSpec(6, 2))


@pytest.mark.parametrize("d,n", [(1, 1), (3, 1), (4, 1), (2, 2), (3, 2)])
def test_unitarity(d, n):
    spec = RegisterSpec(d, n)
    target = make_target("double_well", n)
    sched = TrotterSchedule(1.0, 0.7, 1.5, 3, True)
    for U in (oracle.dense_centered_fourier(spec), oracle.dense_momentum_flip(spec),
              oracle.dense_trotter_unitary(spec, target, sched)):
        assert U.unitarity_residual() < 1e-12


def test_single_register_fourier_is_x0_f_x0():
    N = 8
    j = np.arange(N)
    F = np.exp(2j * np.pi * np.outer(j, j) / N) / np.sqrt(N)
    X = np.eye(N)[(j + N // 2) % N]
    np.testing.assert_allclose(oracle.single_centered_fourier(N), X @ F @ X, atol=1e-14)


def test_boltzmann_uniform_for_flat_target():
    flat = Target("flat", 1, lambda x: np.zeros(x.shape[:-1]), lambda x: np.zeros_like(x))
    np.testing.assert_allclose(oracle.exact_grid_boltzmann(RegisterSpec(4), flat), 1 / 16)


def test_boltzmann_high_temperature_limit():
    pi = oracle.exact_grid_boltzmann(RegisterSpec(5), make_target("double_well", 1, temperature=1e9))
    np.testing.assert_allclose(pi, 1 / 32, rtol=1e-5)


def test_boltzmann_survives_low_temperature():
    pi = oracle.exact_grid_boltzmann(RegisterSpec(5), make_target("double_well", 1, temperature=1e-4))
    assert np.isfinite(pi).all() and pi.sum() == pytest.approx(1.0)
    assert pi.max() > 0.99


def test_boltzmann_matches_formula():
    spec = RegisterSpec(3)
    t = make_target("gaussian", 1, temperature=0.5)
    x = spec.spacing * (np.arange(8) - 4)
    w = np.exp((-x - x**2) / 0.5)
    np.testing.assert_allclose(oracle.exact_grid_boltzmann(spec, t), w / w.sum(), rtol=1e-12)


def test_flip_conjugation_holds_in_modulus_only(rng):
    spec = RegisterSpec(3)
    target = make_target("double_well", 1)
    M = oracle.dense_momentum_flip(spec).matrix
    sched = sample_schedule(ScheduleSampler(flip_momentum=False), rng)
    U = oracle.dense_trotter_unitary(spec, target, sched).matrix
    lhs = M @ U @ M
    assert np.abs(np.abs(lhs) - np.abs(U.T)).max() < 1e-12
    # as an operator identity it needs a state-dependent phase
    phase = lhs[0, 0] / U.T[0, 0]
    assert np.abs(lhs - phase * U.T).max() > 1e-3


def test_metropolis_matrix_columns_stochastic(rng):
    P = rng.random((6, 6))
    P = P + P.T
    P /= P.sum(axis=0, keepdims=True)
    T = oracle.metropolis_transition_matrix(P, rng.normal(size=6))
    np.testing.assert_allclose(T.sum(axis=0), 1.0, atol=1e-12)
    assert (T >= -1e-15).all()
