"""Benchmark targets with analytic gradients and temperature scaling.

All callables are vectorized over leading axes: ``x`` has shape ``(..., n)``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import ConfigError, DomainError


@dataclass(frozen=True)
class Target:
    name: str
    dim: int
    log_prob: Callable[[np.ndarray], np.ndarray]
    grad_log_prob: Callable[[np.ndarray], np.ndarray]
    temperature: float = 1.0

    def __post_init__(self):
        if not self.temperature > 0:
            raise ConfigError(f"temperature must be positive, got {self.temperature}")

    def with_temperature(self, temperature: float) -> "Target":
        return replace(self, temperature=float(temperature))


def _as_points(target: Target, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (target.dim,):
        raise DomainError(f"{target.name} expects points of dimension {target.dim}, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DomainError("non-finite input point")
    return x


def energy(target: Target, x):
    """``-log_prob(x) / T``."""
    x = _as_points(target, x)
    return -target.log_prob(x) / target.temperature


def grad_energy(target: Target, x) -> np.ndarray:
    x = _as_points(target, x)
    return -target.grad_log_prob(x) / target.temperature


def tempered_log_prob(target: Target, x):
    return target.log_prob(_as_points(target, x)) / target.temperature


def _check_dim(name: str, n: int, minimum: int = 1) -> int:
    if int(n) != n or n < minimum:
        raise ConfigError(f"{name} needs dimension >= {minimum}, got {n}")
    return int(n)


def make_gaussian(n: int = 2) -> Target:
    """Log-probability ``sum_i (-x_i - x_i^2)``; mean ``-1/2`` per coordinate."""
    n = _check_dim("gaussian", n)
    return Target(
        "gaussian", n,
        lambda x: np.sum(-x - x**2, axis=-1),
        lambda x: -1.0 - 2.0 * x,
    )


def make_gaussian_centered(n: int = 2) -> Target:
    """Log-probability ``-sum_i x_i^2``, centered at the origin."""
    n = _check_dim("gaussian_centered", n)
    return Target(
        "gaussian_centered", n,
        lambda x: -np.sum(x**2, axis=-1),
        lambda x: -2.0 * x,
    )


def _rosen_lp(x):
    a, b = x[..., :-1], x[..., 1:]
    return -np.sum(10.0 * (b - a) ** 2 + (1.0 - a) ** 2, axis=-1)


def _rosen_grad(x):
    a, b = x[..., :-1], x[..., 1:]
    g = np.zeros_like(x)
    g[..., :-1] += 20.0 * (b - a) + 2.0 * (1.0 - a)
    g[..., 1:] -= 20.0 * (b - a)
    return g


def make_rosenbrock(n: int = 2) -> Target:
    n = _check_dim("rosenbrock", n, minimum=2)
    return Target("rosenbrock", n, _rosen_lp, _rosen_grad)


def _dw_lp(x):
    x0 = x[..., 0]
    lp = -(x0**4 - 4.0 * x0**2) - 0.5 * x0
    if x.shape[-1] == 2:
        lp = lp - x[..., 1] ** 2
    return lp


def _dw_grad(x):
    g = np.zeros_like(x)
    x0 = x[..., 0]
    g[..., 0] = -(4.0 * x0**3 - 8.0 * x0) - 0.5
    if x.shape[-1] == 2:
        g[..., 1] = -2.0 * x[..., 1]
    return g


def make_double_well(n: int = 2) -> Target:
    """``-(x0^4 - 4 x0^2 + x1^2) - 0.5 x0``; ``n=1`` drops the ``x1`` term."""
    if n not in (1, 2):
        raise ConfigError(f"double_well is defined for n in (1, 2), got {n}")
    return Target("double_well", int(n), _dw_lp, _dw_grad)


def make_styblinski_tang(n: int = 2) -> Target:
    n = _check_dim("styblinski_tang", n)
    return Target(
        "styblinski_tang", n,
        lambda x: -0.5 * np.sum(x**4 - 16.0 * x**2 + 5.0 * x, axis=-1),
        lambda x: -0.5 * (4.0 * x**3 - 32.0 * x + 5.0),
    )


REGISTRY: dict[str, Callable[[int], Target]] = {
    "gaussian": make_gaussian,
    "gaussian_centered": make_gaussian_centered,
    "rosenbrock": make_rosenbrock,
    "double_well": make_double_well,
    "styblinski_tang": make_styblinski_tang,
}


def make_target(name: str, dim: int = 2, temperature: float = 1.0) -> Target:
    try:
        ctor = REGISTRY[name]
    except KeyError:
        raise ConfigError(f"unknown target {name!r}; choose from {sorted(REGISTRY)}") from None
    return ctor(dim).with_temperature(temperature)
