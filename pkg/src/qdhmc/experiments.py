"""Experiment runner: repeated chains, sweeps and wavefunction snapshots.

Outputs
-------
``traces_T<temperature>.csv``
    One file per temperature with columns ``rep, step, accepted, energy,
    coord_0 .. coord_{n-1}``.  ``energy`` is the temperature-free objective
    ``-log_prob(x)`` at the chain's current point after each step.
``summary.json``
    Per-temperature acceptance, autocorrelation time and ESS of the energy
    trace, best energy and wall time.  ``schema_version`` is bumped whenever
    a column or key changes.
"""
from __future__ import annotations

import copy
import csv
import itertools
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .diagnostics import acceptance_curve, autocorrelation_time
from .dynamics import ScheduleSampler, TrotterSchedule, trotter_steps
from .errors import ConfigError, DomainError, QDHMCError
from .grid import RegisterSpec, nearest_indices
from .samplers import HMC, QDHMC, ChainResult, HmcParams
from .statevector import basis_state
from .targets import REGISTRY, make_target

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SAMPLERS = ("qdhmc", "hmc")
MAX_SIM_QUBITS = 24  # 2**24 complex amplitudes is 256 MiB per state


@dataclass
class ScheduleConfig:
    t_range: list = field(default_factory=lambda: [0.5, 2.5])
    steps_range: list = field(default_factory=lambda: [5, 20])
    eta: Any = 1.0
    lam: Any = 1.0
    flip_momentum: bool = True

    def sampler(self) -> ScheduleSampler:
        def tup(v):
            return tuple(v) if isinstance(v, (list, tuple)) else v
        return ScheduleSampler(tup(self.t_range), tup(self.steps_range), tup(self.eta),
                               tup(self.lam), bool(self.flip_momentum))


@dataclass
class HmcConfig:
    step_size: float = 0.05
    leapfrog_steps: int = 10
    mass: Any = 1.0

    def params(self) -> HmcParams:
        return HmcParams(float(self.step_size), int(self.leapfrog_steps), self.mass)


@dataclass
class ExperimentConfig:
    target: str = "double_well"
    dim: int = 2
    sampler: str = "qdhmc"
    qubits_per_dim: int = 5
    schedule: ScheduleConfig = field(default_factory=ScheduleConfig)
    hmc: HmcConfig = field(default_factory=HmcConfig)
    temperatures: list = field(default_factory=lambda: [1.0])
    n_samples: int = 1000
    repetitions: int = 1
    seed: int = 0
    out: str = "results"
    workers: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = copy.deepcopy(data)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            sched = ScheduleConfig(**data.pop("schedule", {}))
            hmc = HmcConfig(**data.pop("hmc", {}))
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        cfg = cls(schedule=sched, hmc=hmc, **data)
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            try:
                return cls.from_dict(json.load(fh))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from None

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self) -> None:
        if self.target not in REGISTRY:
            raise ConfigError(f"unknown target {self.target!r}; choose from {sorted(REGISTRY)}")
        if self.sampler not in SAMPLERS:
            raise ConfigError(f"sampler must be one of {SAMPLERS}, got {self.sampler!r}")
        if not self.temperatures or any(not (float(t) > 0) for t in self.temperatures):
            raise ConfigError("temperatures must be a non-empty list of positive numbers")
        if int(self.n_samples) < 0 or int(self.repetitions) < 1 or int(self.workers) < 1:
            raise ConfigError("n_samples >= 0, repetitions >= 1 and workers >= 1 required")
        make_target(self.target, self.dim)
        try:
            spec = RegisterSpec(int(self.qubits_per_dim), int(self.dim))
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
        if self.sampler == "qdhmc" and spec.total_qubits > MAX_SIM_QUBITS:
            raise ConfigError(f"{spec.total_qubits} qubits exceeds the simulation limit of {MAX_SIM_QUBITS}")
        self.schedule.sampler()
        self.hmc.params()

    @property
    def register(self) -> RegisterSpec:
        return RegisterSpec(int(self.qubits_per_dim), int(self.dim))


def _chain_seeds(config: ExperimentConfig) -> list[np.random.SeedSequence]:
    n = len(config.temperatures) * int(config.repetitions)
    return np.random.SeedSequence(int(config.seed)).spawn(n)


def run_chain(config: ExperimentConfig, temperature: float, seed: np.random.SeedSequence) -> ChainResult:
    """One repetition; the chain owns its generator so results ignore scheduling."""
    rng = np.random.default_rng(seed)
    target = make_target(config.target, config.dim, temperature)
    spec = config.register
    if config.sampler == "qdhmc":
        return QDHMC(spec, target, config.schedule.sampler()).run(int(config.n_samples), rng)
    return HMC(target, config.hmc.params()).run(int(config.n_samples), rng, box=spec.bounds)


def _run_job(args):
    config, temperature, seed = args
    return run_chain(config, temperature, seed)


def _trace_name(temperature: float) -> str:
    return f"traces_T{float(temperature):g}.csv"


def _header(n: int) -> list[str]:
    return ["rep", "step", "accepted", "energy"] + [f"coord_{i}" for i in range(n)]


def _rows(rep: int, result: ChainResult, temperature: float):
    objective = result.energies * temperature
    for step in range(len(result)):
        yield [rep, step, int(result.accepted[step]), repr(float(objective[step]))] + [
            repr(float(c)) for c in result.points[step]
        ]


def _tau_or_none(series):
    try:
        return autocorrelation_time(series).tau
    except QDHMCError:
        return None


def _summarize(temperature: float, results: list[ChainResult]) -> dict:
    reps = []
    for rep, res in enumerate(results):
        objective = res.energies * temperature
        tau = _tau_or_none(objective) if len(res) else None
        reps.append({
            "rep": rep,
            "acceptance_rate": res.acceptance_rate if len(res) else None,
            "tau": tau,
            "ess": (len(res) / (2 * tau)) if tau else None,
            "best_energy": float(objective.min()) if len(res) else None,
            "final_energy": float(objective[-1]) if len(res) else None,
        })

    def mean(key):
        vals = [r[key] for r in reps if r[key] is not None]
        return float(np.mean(vals)) if vals else None

    rows = acceptance_curve({temperature: [r.accepted for r in results]})
    return {
        "temperature": float(temperature),
        "acceptance_mean": rows[0].mean if rows else None,
        "acceptance_std": rows[0].std if rows else None,
        "tau_mean": mean("tau"),
        "ess_mean": mean("ess"),
        "best_energy": min((r["best_energy"] for r in reps if r["best_energy"] is not None), default=None),
        "final_energy_mean": mean("final_energy"),
        "repetitions": reps,
    }


def _prepare_out(out) -> Path:
    path = Path(out)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}") from None
    if not os.access(path, os.W_OK):
        raise ConfigError(f"output directory {out} is not writable")
    return path


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    results: dict  # temperature -> list[ChainResult]
    summary: dict


def run_experiment(config: ExperimentConfig, write: bool = True) -> ExperimentResult:
    """Run every (temperature, repetition) chain and optionally write outputs.

    Chains fan out over ``config.workers`` processes; rows are written in
    (temperature, repetition) order as results arrive, so output is identical
    for any worker count and partial traces survive an interrupt.
    """
    config.validate()
    out = _prepare_out(config.out) if write else None
    seeds = _chain_seeds(config)
    temps = [float(t) for t in config.temperatures]
    reps = int(config.repetitions)
    jobs = [(config, t, seeds[i * reps + j]) for i, t in enumerate(temps) for j in range(reps)]

    start = time.perf_counter()
    results: dict[float, list[ChainResult]] = {t: [] for t in temps}
    interrupted = False
    files, writers = {}, {}
    pool = ProcessPoolExecutor(int(config.workers)) if int(config.workers) > 1 else None
    try:
        if out is not None:
            for t in temps:
                fh = open(out / _trace_name(t), "w", newline="")
                files[t] = fh
                writers[t] = csv.writer(fh, lineterminator="\n")
                writers[t].writerow(_header(int(config.dim)))
        stream = pool.map(_run_job, jobs) if pool else map(_run_job, jobs)
        for (_, t, _), res in zip(jobs, stream):
            if out is not None:
                writers[t].writerows(_rows(len(results[t]), res, t))
                files[t].flush()
            results[t].append(res)
    except KeyboardInterrupt:
        interrupted = True
        log.warning("interrupted; flushing partial results")
    finally:
        for fh in files.values():
            fh.close()
        if pool is not None:
            pool.shutdown(wait=not interrupted, cancel_futures=True)

    summary = {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "temperatures": [_summarize(t, results[t]) for t in temps if results[t]],
        "wall_time_s": time.perf_counter() - start,
        "interrupted": interrupted,
    }
    if out is not None:
        with open(out / "summary.json", "w") as fh:
            json.dump(summary, fh, indent=2)
    if interrupted:
        raise KeyboardInterrupt
    return ExperimentResult(config, results, summary)


# sweeps ---------------------------------------------------------------------


def _set_path(data: dict, dotted: str, value) -> None:
    keys = dotted.split(".")
    node = data
    for k in keys[:-1]:
        if k not in node or not isinstance(node[k], dict):
            raise ConfigError(f"unknown sweep parameter {dotted!r}")
        node = node[k]
    if keys[-1] not in node:
        raise ConfigError(f"unknown sweep parameter {dotted!r}")
    node[keys[-1]] = value


def _metric(summary: dict, metric: str) -> float:
    key = {"energy": "final_energy_mean", "tau": "tau_mean"}.get(metric)
    if key is None:
        raise ConfigError(f"metric must be 'energy' or 'tau', got {metric!r}")
    vals = [row[key] for row in summary["temperatures"] if row[key] is not None]
    return float(np.mean(vals)) if vals else math.inf


def _candidates(grid: dict, mode: str, n_random: int, rng: np.random.Generator) -> list[dict]:
    names = list(grid)
    if mode == "grid":
        for name in names:
            if not isinstance(grid[name], (list, tuple)) or not grid[name]:
                raise ConfigError(f"grid values for {name!r} must be a non-empty list")
        return [dict(zip(names, combo)) for combo in itertools.product(*(grid[n] for n in names))]
    if mode != "random":
        raise ConfigError(f"mode must be 'grid' or 'random', got {mode!r}")
    out = []
    for _ in range(int(n_random)):
        point = {}
        for name in names:
            spec = grid[name]
            if isinstance(spec, dict):
                lo, hi = spec["low"], spec["high"]
                if isinstance(lo, int) and isinstance(hi, int):
                    point[name] = int(rng.integers(lo, hi + 1))
                else:
                    point[name] = float(rng.uniform(lo, hi))
            elif isinstance(spec, (list, tuple)) and spec:
                point[name] = spec[int(rng.integers(len(spec)))]
            else:
                raise ConfigError(f"random search values for {name!r} must be a list or {{low, high}}")
        out.append(point)
    return out


def sweep(config: ExperimentConfig, grid: dict, metric: str = "energy", mode: str = "grid",
          n_random: int = 10, write: bool = True) -> dict:
    """Evaluate hyperparameter candidates and rank them (lower metric is better).

    ``grid`` maps dotted config paths (``hmc.step_size``, ``schedule.eta`` ...)
    to value lists, or in random mode optionally to ``{"low": a, "high": b}``.
    """
    if not grid:
        raise ConfigError("sweep grid is empty")
    rng = np.random.default_rng(np.random.SeedSequence([int(config.seed), 1]))
    candidates = _candidates(grid, mode, n_random, rng)
    if not candidates:
        raise ConfigError("sweep produced no candidates")
    base = config.to_dict()
    entries = []
    for params in candidates:
        data = copy.deepcopy(base)
        for name, value in params.items():
            _set_path(data, name, value)
        cfg = ExperimentConfig.from_dict(data)
        summary = run_experiment(cfg, write=False).summary
        entries.append({"params": params, "metric": _metric(summary, metric)})
    entries.sort(key=lambda e: e["metric"])

    boundary = []
    if mode == "grid":
        best = entries[0]["params"]
        for name, values in grid.items():
            nums = [v for v in values if isinstance(v, (int, float)) and not isinstance(v, bool)]
            if len(nums) >= 3 and best[name] in (min(nums), max(nums)):
                boundary.append(name)
                log.warning("best %s=%r lies on the sweep boundary", name, best[name])
    ranked = {
        "schema_version": SCHEMA_VERSION,
        "metric": metric,
        "mode": mode,
        "ranking": [dict(rank=i + 1, **e) for i, e in enumerate(entries)],
        "at_boundary": boundary,
    }
    if write:
        out = _prepare_out(config.out)
        with open(out / "sweep.json", "w") as fh:
            json.dump(ranked, fh, indent=2)
    return ranked


# wavefunction snapshots -----------------------------------------------------


def snapshot_wavefunction(config: ExperimentConfig, start, total_time: float, steps: int,
                          eta: float, lam: float, temperature: float | None = None,
                          flip_momentum: bool = False, write: bool = True) -> list[np.ndarray]:
    """Position probabilities on the grid after every Trotter step of one proposal.

    ``start`` is a point in coordinates, snapped to the nearest grid index.
    Returns ``steps + 1`` arrays shaped like the grid (step 0 is the basis state).
    """
    if int(config.dim) > 2:
        raise DomainError(f"snapshots support at most 2 dimensions, got {config.dim}")
    spec = config.register
    temp = float(config.temperatures[0] if temperature is None else temperature)
    target = make_target(config.target, config.dim, temp)
    schedule = TrotterSchedule(eta=eta, lam=lam, total_time=total_time, steps=int(steps),
                               flip_momentum=flip_momentum)
    psi0 = basis_state(spec, nearest_indices(spec, start))
    frames = [s.grid_probabilities() for s in trotter_steps(psi0, target, schedule)]
    if write:
        out = _prepare_out(config.out)
        for k, frame in enumerate(frames):
            np.savetxt(out / f"snapshot_step{k:03d}.csv", np.atleast_2d(frame), delimiter=",", fmt="%.17g")
    return frames
