"""QD-HMC and classical HMC Markov chains sharing one Metropolis step."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import grid
from .dynamics import ScheduleSampler, TrotterSchedule, potential_values, sample_schedule, trotter_evolve
from .errors import ConfigError, DivergenceError, QDHMCError
from .grid import RegisterSpec
from .statevector import basis_state, sample_measurement
from .targets import Target, energy, grad_energy

log = logging.getLogger(__name__)


def metropolis_accept(f_x: float, f_y: float, rng: np.random.Generator) -> bool:
    """Accept with probability ``min(1, exp(f_x - f_y))`` for energies ``f``.

    Exactly one uniform variate is consumed per call so that streams stay
    aligned; non-finite energies are rejected.
    """
    u = rng.random()
    if not (math.isfinite(f_x) and math.isfinite(f_y)):
        log.warning("non-finite energy in acceptance test (f_x=%r, f_y=%r); rejecting", f_x, f_y)
        return False
    delta = f_x - f_y
    if delta >= 0:
        return True
    return u < math.exp(delta)


@dataclass
class ChainState:
    point: Any  # tuple of grid indices (QD-HMC) or float array (HMC)
    energy: float
    step: int = 0


@dataclass
class ChainResult:
    points: np.ndarray          # (n_steps, n) coordinates after each step
    energies: np.ndarray        # tempered energy after each step
    accepted: np.ndarray        # bool, one per step
    proposals: list = field(default_factory=list)
    indices: np.ndarray | None = None  # grid indices (QD-HMC only)

    def __len__(self):
        return len(self.accepted)

    @property
    def acceptance_rate(self) -> float:
        return float(np.mean(self.accepted)) if len(self.accepted) else float("nan")


def _empty_result(n: int, with_indices: bool) -> ChainResult:
    return ChainResult(
        points=np.zeros((0, n)), energies=np.zeros(0), accepted=np.zeros(0, dtype=bool),
        indices=np.zeros((0, n), dtype=np.int64) if with_indices else None,
    )


class QDHMC:
    """Metropolis chain with proposals from simulated quantum dynamics on a grid."""

    def __init__(self, spec: RegisterSpec, target: Target, sampler: ScheduleSampler):
        if target.dim != spec.num_dims:
            raise ConfigError(f"target dimension {target.dim} != register dimension {spec.num_dims}")
        self.spec = spec
        self.target = target
        self.sampler = sampler
        # tabulated once; proposals and acceptance both read from it
        self.energies = potential_values(spec, target)

    def energy_at(self, indices: Sequence[int]) -> float:
        return float(self.energies[grid.pack_indices(self.spec, indices)])

    def initial_state(self, rng: np.random.Generator, indices: Sequence[int] | None = None) -> ChainState:
        if indices is None:
            indices = tuple(int(k) for k in rng.integers(0, self.spec.points_per_dim, self.spec.num_dims))
        indices = tuple(int(k) for k in indices)
        return ChainState(indices, self.energy_at(indices))

    def propose(self, state: ChainState, rng: np.random.Generator,
                schedule: TrotterSchedule | None = None) -> tuple[tuple[int, ...], TrotterSchedule]:
        if schedule is None:
            schedule = sample_schedule(self.sampler, rng)
        psi = trotter_evolve(basis_state(self.spec, state.point), self.target, schedule,
                             energies=self.energies)
        return sample_measurement(psi, rng), schedule

    def step(self, state: ChainState, rng: np.random.Generator) -> tuple[ChainState, bool, TrotterSchedule | None]:
        try:
            y, schedule = self.propose(state, rng)
        except QDHMCError as exc:
            log.warning("proposal aborted at step %d: %s", state.step, exc)
            return ChainState(state.point, state.energy, state.step + 1), False, None
        f_y = self.energy_at(y)
        if metropolis_accept(state.energy, f_y, rng):
            return ChainState(y, f_y, state.step + 1), True, schedule
        return ChainState(state.point, state.energy, state.step + 1), False, schedule

    def run(self, n_samples: int, rng: np.random.Generator,
            init: Sequence[int] | None = None, keep_schedules: bool = False) -> ChainResult:
        n = self.spec.num_dims
        state = self.initial_state(rng, init)
        if n_samples <= 0:
            return _empty_result(n, with_indices=True)
        idx = np.empty((n_samples, n), dtype=np.int64)
        energies = np.empty(n_samples)
        accepted = np.empty(n_samples, dtype=bool)
        schedules = []
        for i in range(n_samples):
            state, acc, sched = self.step(state, rng)
            idx[i] = state.point
            energies[i] = state.energy
            accepted[i] = acc
            if keep_schedules:
                schedules.append(sched)
        points = self.spec.spacing * (idx - self.spec.points_per_dim / 2)
        return ChainResult(points=points, energies=energies, accepted=accepted,
                           proposals=schedules, indices=idx)


def run_qdhmc(spec: RegisterSpec, target: Target, sampler: ScheduleSampler, n_samples: int,
              seed=None, init: Sequence[int] | None = None, keep_schedules: bool = False) -> ChainResult:
    """Run one QD-HMC chain; ``init=None`` starts at a uniformly random grid index."""
    rng = np.random.default_rng(seed)
    return QDHMC(spec, target, sampler).run(n_samples, rng, init, keep_schedules)


# classical HMC -------------------------------------------------------------


@dataclass(frozen=True)
class HmcParams:
    step_size: float
    leapfrog_steps: int
    mass: Sequence[float] | float = 1.0

    def __post_init__(self):
        if not self.step_size > 0:
            raise ConfigError(f"step_size must be positive, got {self.step_size}")
        if int(self.leapfrog_steps) != self.leapfrog_steps or self.leapfrog_steps < 1:
            raise ConfigError(f"leapfrog_steps must be a positive integer, got {self.leapfrog_steps}")
        if not np.all(np.asarray(self.mass, dtype=float) > 0):
            raise ConfigError("mass entries must be positive")

    def mass_vector(self, n: int) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.mass, dtype=float), (n,)).copy()


def leapfrog(x, p, target: Target, step_size: float, n_steps: int, mass=1.0):
    """``n_steps`` of half kick, drift, half kick on the tempered log density.

    Raises :class:`DivergenceError` if the trajectory leaves the finite reals.
    Non-finite values propagate, so the check runs once at the end.
    """
    x = np.array(x, dtype=float)
    p = np.array(p, dtype=float)
    grad_energy(target, x)  # validates shape and finiteness of the start
    inv_mass = 1.0 / np.broadcast_to(np.asarray(mass, dtype=float), x.shape)
    half = 0.5 * float(step_size) / target.temperature
    drift = float(step_size) * inv_mass
    grad = target.grad_log_prob
    with np.errstate(all="ignore"):
        for _ in range(int(n_steps)):
            p = p + half * grad(x)
            x = x + drift * p
            p = p + half * grad(x)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(p))):
        raise DivergenceError("leapfrog trajectory became non-finite")
    return x, p


def _hamiltonian(target: Target, x, p, mass) -> float:
    with np.errstate(all="ignore"):
        return float(energy(target, x) + 0.5 * np.sum(p * p / mass))


class HMC:
    def __init__(self, target: Target, params: HmcParams):
        self.target = target
        self.params = params
        self.mass = params.mass_vector(target.dim)

    def initial_state(self, rng: np.random.Generator, x=None, box: tuple[float, float] = (-1.0, 1.0)) -> ChainState:
        if x is None:
            x = rng.uniform(box[0], box[1], self.target.dim)
        x = np.asarray(x, dtype=float).reshape(self.target.dim)
        return ChainState(x, float(energy(self.target, x)))

    def step(self, state: ChainState, rng: np.random.Generator) -> tuple[ChainState, bool, np.ndarray]:
        p0 = rng.standard_normal(self.target.dim) * np.sqrt(self.mass)
        h0 = state.energy + 0.5 * float(np.sum(p0 * p0 / self.mass))
        try:
            x1, p1 = leapfrog(state.point, p0, self.target, self.params.step_size,
                              self.params.leapfrog_steps, self.mass)
            h1 = _hamiltonian(self.target, x1, p1, self.mass)
        except DivergenceError as exc:
            log.debug("divergent trajectory at step %d: %s", state.step, exc)
            rng.random()  # keep the stream aligned with the non-divergent path
            return ChainState(state.point, state.energy, state.step + 1), False, p0
        if math.isfinite(h1) and metropolis_accept(h0, h1, rng):
            return ChainState(x1, float(energy(self.target, x1)), state.step + 1), True, p0
        if not math.isfinite(h1):
            rng.random()
        return ChainState(state.point, state.energy, state.step + 1), False, p0

    def run(self, n_samples: int, rng: np.random.Generator, init=None,
            box: tuple[float, float] = (-1.0, 1.0), keep_momenta: bool = False) -> ChainResult:
        n = self.target.dim
        state = self.initial_state(rng, init, box)
        if n_samples <= 0:
            return _empty_result(n, with_indices=False)
        points = np.empty((n_samples, n))
        energies = np.empty(n_samples)
        accepted = np.empty(n_samples, dtype=bool)
        momenta = []
        for i in range(n_samples):
            state, acc, p0 = self.step(state, rng)
            points[i] = state.point
            energies[i] = state.energy
            accepted[i] = acc
            if keep_momenta:
                momenta.append(p0)
        return ChainResult(points=points, energies=energies, accepted=accepted, proposals=momenta)


def run_hmc(target: Target, params: HmcParams, n_samples: int, seed=None, init=None,
            box: tuple[float, float] = (-1.0, 1.0), keep_momenta: bool = False) -> ChainResult:
    """Run one HMC chain; ``init=None`` starts uniformly inside ``box`` per coordinate."""
    rng = np.random.default_rng(seed)
    return HMC(target, params).run(n_samples, rng, init, box, keep_momenta)
