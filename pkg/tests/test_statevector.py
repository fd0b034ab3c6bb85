import numpy as np
import pytest

from qdhmc.errors import DomainError, NormalizationError
from qdhmc.grid import RegisterSpec, grid_coord
from qdhmc.spectral import from_momentum_basis
from qdhmc.statevector import (
    Statevector, basis_state, expectation_momentum, expectation_position, from_wavefunction,
    gaussian_wavepacket, sample_measurement,
)

from helpers import random_state


def test_basis_state():
    s = basis_state(RegisterSpec(2), (3,))
    np.testing.assert_array_equal(s.amplitudes, [0, 0, 0, 1])
    assert s.norm() == 1.0
    s2 = basis_state(RegisterSpec(2, 2), (0, 0))
    assert s2.amplitudes[0] == 1 and s2.norm() == 1.0


def test_basis_state_invalid():
    with pytest.raises(DomainError):
        basis_state(RegisterSpec(2), (4,))


def test_measurement_deterministic_on_basis_state(rng):
    s = basis_state(RegisterSpec(2), (3,))
    assert all(sample_measurement(s, rng) == (3,) for _ in range(100))


def test_measurement_uniform_frequencies(rng):
    spec = RegisterSpec(2)
    s = from_wavefunction(spec, np.ones(4))
    draws = np.array([sample_measurement(s, rng)[0] for _ in range(100_000)])
    freq = np.bincount(draws, minlength=4) / draws.size
    np.testing.assert_allclose(freq, 0.25, atol=0.01)


def test_measurement_seeded_sequence_reproducible():
    spec = RegisterSpec(3)
    s = random_state(spec, np.random.default_rng(0))
    r1, r2 = np.random.default_rng(7), np.random.default_rng(7)
    seq1 = [sample_measurement(s, r1) for _ in range(50)]
    seq2 = [sample_measurement(s, r2) for _ in range(50)]
    assert seq1 == seq2


def test_measurement_does_not_mutate(rng):
    s = random_state(RegisterSpec(3), rng)
    before = s.amplitudes.copy()
    sample_measurement(s, rng)
    np.testing.assert_array_equal(s.amplitudes, before)


def test_measurement_chi_square(rng):
    from scipy import stats

    spec = RegisterSpec(3)
    s = random_state(spec, rng)
    draws = np.array([sample_measurement(s, rng)[0] for _ in range(20_000)])
    counts = np.bincount(draws, minlength=8)
    _, pval = stats.chisquare(counts, s.probabilities() * draws.size)
    assert pval > 1e-3


def test_unnormalized_state_rejected(rng):
    s = Statevector(np.ones(4) * 0.6, RegisterSpec(2))
    with pytest.raises(NormalizationError):
        sample_measurement(s, rng)


def test_position_expectation_basis_center():
    spec = RegisterSpec(4)
    assert expectation_position(basis_state(spec, (8,))) == 0.0


def test_position_expectation_symmetric_superposition():
    spec = RegisterSpec(3)
    k = 2
    amps = np.zeros(8)
    amps[k] = amps[8 - k] = 1 / np.sqrt(2)
    s = Statevector(amps, spec)
    mid = (grid_coord(spec, k) + grid_coord(spec, 8 - k)) / 2
    assert expectation_position(s) == pytest.approx(mid, abs=1e-14)


def test_momentum_eigenstate_expectation():
    spec = RegisterSpec(4)
    # F_c |N/2>: momentum eigenstate with eigenvalue x_{N/2} = 0
    s = from_momentum_basis(basis_state(spec, (8,)), 0)
    assert expectation_momentum(s) == pytest.approx(0.0, abs=1e-12)
    s = from_momentum_basis(basis_state(spec, (11,)), 0)
    assert expectation_momentum(s) == pytest.approx(grid_coord(spec, 11), abs=1e-12)


def test_momentum_expectation_of_boosted_packet():
    spec = RegisterSpec(8)
    s = gaussian_wavepacket(spec, center=1.0, width=1.0, momentum=2.0)
    assert expectation_momentum(s) == pytest.approx(2.0, rel=1e-6)
    assert expectation_position(s) == pytest.approx(1.0, rel=1e-6)


def test_expectation_dim_out_of_range():
    s = basis_state(RegisterSpec(2, 2), (0, 0))
    with pytest.raises(DomainError):
        expectation_position(s, 2)
    with pytest.raises(DomainError):
        expectation_momentum(s, -1)
