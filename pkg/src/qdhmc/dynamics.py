"""Trotterized evolution under ``H = eta p^2 / 2 + lambda f(x)``.

Each Trotter step applies the potential phase ``exp(-i lambda dt f(x))``
followed by the kinetic phase ``exp(-i eta dt p^2 / 2)``.  The grid is
periodic under the discrete transform, so wavepackets that reach an edge
wrap around; size registers so the dynamics stay away from the boundary.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import grid
from ._backend import kernels
from .errors import ConfigError, EvolutionError
from .grid import RegisterSpec
from .spectral import kinetic_multipliers, momentum_flip_fast
from .statevector import Statevector, expectation_diagonal, expectation_momentum_sq
from .targets import Target, energy


@dataclass(frozen=True)
class TrotterSchedule:
    eta: float
    lam: float
    total_time: float
    steps: int
    flip_momentum: bool = True

    def __post_init__(self):
        if self.eta < 0 or self.lam < 0 or self.total_time < 0:
            raise ConfigError(f"schedule parameters must be non-negative: {self}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ConfigError(f"steps must be a positive integer, got {self.steps}")

    @property
    def dt(self) -> float:
        return self.total_time / self.steps

    @property
    def kinetic_angle(self) -> float:
        return self.eta * self.total_time / self.steps

    @property
    def potential_angle(self) -> float:
        return self.lam * self.total_time / self.steps


def _range(value, name):
    if np.isscalar(value):
        lo = hi = float(value)
    else:
        lo, hi = (float(v) for v in value)
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo > hi:
        raise ConfigError(f"{name} range is empty or inverted: {value!r}")
    return lo, hi


@dataclass(frozen=True)
class ScheduleSampler:
    """Ranges for random Trotterization; scalars mean a fixed value."""

    t_range: tuple[float, float] | float = (0.5, 2.5)
    steps_range: tuple[int, int] | int = (5, 20)
    eta: tuple[float, float] | float = 1.0
    lam: tuple[float, float] | float = 1.0
    flip_momentum: bool = True

    def __post_init__(self):
        t_lo, _ = _range(self.t_range, "t_range")
        r_lo, r_hi = _range(self.steps_range, "steps_range")
        if r_lo < 1 or r_lo != int(r_lo) or r_hi != int(r_hi):
            raise ConfigError(f"steps_range must hold positive integers: {self.steps_range!r}")
        if t_lo < 0 or _range(self.eta, "eta")[0] < 0 or _range(self.lam, "lam")[0] < 0:
            raise ConfigError("t, eta and lam ranges must be non-negative")


def sample_schedule(sampler: ScheduleSampler, rng: np.random.Generator) -> TrotterSchedule:
    """Draw a schedule; the draw never depends on the chain state."""
    t_lo, t_hi = _range(sampler.t_range, "t_range")
    r_lo, r_hi = (int(v) for v in _range(sampler.steps_range, "steps_range"))
    e_lo, e_hi = _range(sampler.eta, "eta")
    l_lo, l_hi = _range(sampler.lam, "lam")
    # fixed draw order keeps streams aligned across configurations
    t = rng.uniform(t_lo, t_hi)
    r = int(rng.integers(r_lo, r_hi + 1))
    eta = rng.uniform(e_lo, e_hi)
    lam = rng.uniform(l_lo, l_hi)
    return TrotterSchedule(eta=eta, lam=lam, total_time=t, steps=r,
                           flip_momentum=sampler.flip_momentum)


def potential_values(spec: RegisterSpec, target: Target) -> np.ndarray:
    """Energy ``-log_prob/T`` at every flat grid index."""
    if target.dim != spec.num_dims:
        raise ConfigError(f"target dimension {target.dim} != register dimension {spec.num_dims}")
    coords = grid.all_coords(spec)
    with np.errstate(all="ignore"):
        f = np.asarray(energy(target, coords), dtype=float)
    bad = np.flatnonzero(~np.isfinite(f))
    if bad.size:
        k = int(bad[0])
        raise EvolutionError(
            f"non-finite potential {f[k]} at grid point {grid.unpack_indices(spec, k)} "
            f"(x={coords[k].tolist()})"
        )
    return f


def apply_potential_phase(state: Statevector, target: Target, angle: float,
                          energies: np.ndarray | None = None) -> Statevector:
    f = potential_values(state.spec, target) if energies is None else energies
    return Statevector(state.amplitudes * np.exp(-1j * angle * f), state.spec)


def apply_kinetic_phase(state: Statevector, angle: float) -> Statevector:
    spec = state.spec
    psi = state.amplitudes.copy()
    kernels.kinetic_inplace(psi, spec.num_dims, spec.points_per_dim,
                            kinetic_multipliers(spec, angle))
    return Statevector(psi, spec)


def trotter_evolve(state: Statevector, target: Target, schedule: TrotterSchedule,
                   energies: np.ndarray | None = None) -> Statevector:
    spec = state.spec
    f = potential_values(spec, target) if energies is None else energies
    psi = state.amplitudes.copy()
    kernels.evolve_inplace(
        psi, spec.num_dims, spec.points_per_dim,
        np.exp(-1j * schedule.potential_angle * f),
        kinetic_multipliers(spec, schedule.kinetic_angle),
        int(schedule.steps),
    )
    out = Statevector(psi, spec)
    if schedule.flip_momentum:
        out = momentum_flip_fast(out)
    return out


def trotter_steps(state: Statevector, target: Target, schedule: TrotterSchedule,
                  energies: np.ndarray | None = None) -> Iterator[Statevector]:
    """Yield the initial state and the state after every Trotter step.

    The momentum flip, if enabled, is applied to the final yielded state.
    """
    spec = state.spec
    f = potential_values(spec, target) if energies is None else energies
    pot = np.exp(-1j * schedule.potential_angle * f)
    kin = kinetic_multipliers(spec, schedule.kinetic_angle)
    psi = state.amplitudes.copy()
    yield Statevector(psi.copy(), spec)
    for r in range(schedule.steps):
        kernels.evolve_inplace(psi, spec.num_dims, spec.points_per_dim, pot, kin, 1)
        out = Statevector(psi.copy(), spec)
        if r == schedule.steps - 1 and schedule.flip_momentum:
            out = momentum_flip_fast(out)
        yield out


def hamiltonian_expectation(state: Statevector, target: Target, eta: float, lam: float,
                            energies: np.ndarray | None = None) -> float:
    """``eta <p^2>/2 + lam <f(x)>`` summed over all dimensions."""
    f = potential_values(state.spec, target) if energies is None else energies
    kinetic = sum(expectation_momentum_sq(state, d) for d in range(state.spec.num_dims))
    return eta * kinetic / 2.0 + lam * expectation_diagonal(state, f)
