"""Dense statevectors over multi-register position grids."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import grid
from .errors import DomainError, NormalizationError
from .grid import RegisterSpec

NORM_TOL = 1e-6


@dataclass
class Statevector:
    amplitudes: np.ndarray
    spec: RegisterSpec

    def __post_init__(self):
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (self.spec.size,):
            raise DomainError(
                f"amplitude vector has shape {self.amplitudes.shape}, "
                f"expected ({self.spec.size},)"
            )

    def copy(self) -> "Statevector":
        return Statevector(self.amplitudes.copy(), self.spec)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def grid_probabilities(self) -> np.ndarray:
        """Probabilities reshaped to the ``(N,)*n`` position grid."""
        return self.probabilities().reshape(self.spec.shape)


def basis_state(spec: RegisterSpec, indices: Sequence[int]) -> Statevector:
    amps = np.zeros(spec.size, dtype=np.complex128)
    amps[grid.pack_indices(spec, indices)] = 1.0
    return Statevector(amps, spec)


def from_wavefunction(spec: RegisterSpec, values) -> Statevector:
    """Normalize an arbitrary amplitude array (flat or grid-shaped) into a state."""
    amps = np.asarray(values, dtype=np.complex128).reshape(-1)
    nrm = np.linalg.norm(amps)
    if not np.isfinite(nrm) or nrm == 0:
        raise DomainError("wavefunction must have finite, nonzero norm")
    return Statevector(amps / nrm, spec)


def gaussian_wavepacket(spec: RegisterSpec, center, width, momentum=None) -> Statevector:
    """Product Gaussian ``exp(-(x-c)^2 / (4 w^2) + i p x)`` sampled on the grid."""
    n = spec.num_dims
    center = np.broadcast_to(np.asarray(center, dtype=float), (n,))
    width = np.broadcast_to(np.asarray(width, dtype=float), (n,))
    momentum = np.zeros(n) if momentum is None else np.broadcast_to(
        np.asarray(momentum, dtype=float), (n,))
    x = grid.all_coords(spec)
    logamp = -((x - center) ** 2 / (4.0 * width**2)).sum(axis=1)
    phase = (x * momentum).sum(axis=1)
    return from_wavefunction(spec, np.exp(logamp + 1j * phase))


def check_normalized(state: Statevector, tol: float = NORM_TOL) -> None:
    dev = abs(state.norm() - 1.0)
    if not dev <= tol:
        raise NormalizationError(f"state norm deviates from 1 by {dev:.3e}")


def sample_measurement(state: Statevector, rng: np.random.Generator) -> tuple[int, ...]:
    """Draw one computational-basis outcome; the state is left untouched."""
    check_normalized(state)
    cdf = np.cumsum(state.probabilities())
    u = rng.random() * cdf[-1]
    flat = int(np.searchsorted(cdf, u, side="right"))
    flat = min(flat, state.spec.size - 1)
    return grid.unpack_indices(state.spec, flat)


def _check_dim(spec: RegisterSpec, dim: int) -> int:
    if not 0 <= int(dim) < spec.num_dims:
        raise DomainError(f"dimension {dim} outside [0, {spec.num_dims})")
    return int(dim)


def marginal(probs: np.ndarray, spec: RegisterSpec, dim: int) -> np.ndarray:
    p = probs.reshape(spec.shape)
    axes = tuple(a for a in range(spec.num_dims) if a != dim)
    return p.sum(axis=axes) if axes else p


def expectation_position(state: Statevector, dim: int = 0) -> float:
    dim = _check_dim(state.spec, dim)
    check_normalized(state)
    return float(marginal(state.probabilities(), state.spec, dim) @ grid.axis_coords(state.spec))


def expectation_position_sq(state: Statevector, dim: int = 0) -> float:
    dim = _check_dim(state.spec, dim)
    return float(marginal(state.probabilities(), state.spec, dim) @ grid.axis_coords(state.spec) ** 2)


def momentum_probabilities(state: Statevector) -> np.ndarray:
    from .spectral import to_momentum_basis

    mom = state
    for dim in range(state.spec.num_dims):
        mom = to_momentum_basis(mom, dim)
    return mom.probabilities()


def expectation_momentum(state: Statevector, dim: int = 0) -> float:
    dim = _check_dim(state.spec, dim)
    check_normalized(state)
    from .spectral import to_momentum_basis

    probs = to_momentum_basis(state, dim).probabilities()
    return float(marginal(probs, state.spec, dim) @ grid.axis_coords(state.spec))


def expectation_momentum_sq(state: Statevector, dim: int = 0) -> float:
    dim = _check_dim(state.spec, dim)
    from .spectral import to_momentum_basis

    probs = to_momentum_basis(state, dim).probabilities()
    return float(marginal(probs, state.spec, dim) @ grid.axis_coords(state.spec) ** 2)


def expectation_diagonal(state: Statevector, values: np.ndarray) -> float:
    """``sum_k |a_k|^2 values_k`` for a function tabulated on the flat grid."""
    return float(state.probabilities() @ np.asarray(values, dtype=float))
