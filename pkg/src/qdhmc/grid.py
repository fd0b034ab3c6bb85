"""Qubit-register position grids.

A register of ``d`` qubits encodes ``N = 2**d`` positions per dimension with
eigenvalues ``x_k = sqrt(2*pi/N) * (k - N/2)``.  Multi-dimensional states use
one register per dimension; dimension 0 occupies the most significant block
of the flat basis index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class RegisterSpec:
    qubits_per_dim: int
    num_dims: int = 1

    def __post_init__(self):
        if int(self.qubits_per_dim) < 1 or int(self.num_dims) < 1:
            raise DomainError(
                f"need qubits_per_dim >= 1 and num_dims >= 1, got "
                f"{self.qubits_per_dim}, {self.num_dims}"
            )

    @property
    def points_per_dim(self) -> int:
        return 1 << self.qubits_per_dim

    @property
    def size(self) -> int:
        """Number of amplitudes, ``2**(d*n)``."""
        return 1 << (self.qubits_per_dim * self.num_dims)

    @property
    def total_qubits(self) -> int:
        return self.qubits_per_dim * self.num_dims

    @property
    def spacing(self) -> float:
        return math.sqrt(2.0 * math.pi / self.points_per_dim)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_dim,) * self.num_dims

    @property
    def bounds(self) -> tuple[float, float]:
        """Half-open coordinate interval ``[lo, hi)`` covered by each dimension."""
        half = math.sqrt(2.0 * math.pi) * math.sqrt(self.points_per_dim) / 2.0
        return -half, half


def _check_index(spec: RegisterSpec, k) -> int:
    if isinstance(k, (bool, np.bool_)) or not isinstance(k, (int, np.integer)):
        raise DomainError(f"grid index must be an integer, got {k!r}")
    k = int(k)
    if not 0 <= k < spec.points_per_dim:
        raise DomainError(f"grid index {k} outside [0, {spec.points_per_dim})")
    return k


def grid_coord(spec: RegisterSpec, k: int) -> float:
    k = _check_index(spec, k)
    return spec.spacing * (k - spec.points_per_dim / 2)


def axis_coords(spec: RegisterSpec) -> np.ndarray:
    """All ``N`` grid coordinates of one dimension, in index order."""
    N = spec.points_per_dim
    return spec.spacing * (np.arange(N) - N / 2)


def nearest_index(spec: RegisterSpec, x: float) -> int:
    """Index of the grid point closest to ``x``; ties go to the lower index.

    Points outside the grid clamp to the nearest edge.
    """
    # argmin returns the first minimum, which implements the tie rule
    return int(np.argmin(np.abs(axis_coords(spec) - float(x))))


def nearest_indices(spec: RegisterSpec, x: Sequence[float]) -> tuple[int, ...]:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != spec.num_dims:
        raise DomainError(f"expected {spec.num_dims} coordinates, got {x.size}")
    return tuple(nearest_index(spec, xi) for xi in x)


def pack_indices(spec: RegisterSpec, indices: Sequence[int]) -> int:
    indices = tuple(indices)
    if len(indices) != spec.num_dims:
        raise DomainError(f"expected {spec.num_dims} indices, got {len(indices)}")
    flat = 0
    for k in indices:
        flat = (flat << spec.qubits_per_dim) | _check_index(spec, k)
    return flat


def unpack_indices(spec: RegisterSpec, flat: int) -> tuple[int, ...]:
    if isinstance(flat, (bool, np.bool_)) or not isinstance(flat, (int, np.integer)):
        raise DomainError(f"flat index must be an integer, got {flat!r}")
    flat = int(flat)
    if not 0 <= flat < spec.size:
        raise DomainError(f"flat index {flat} outside [0, {spec.size})")
    mask = spec.points_per_dim - 1
    out = []
    for _ in range(spec.num_dims):
        out.append(flat & mask)
        flat >>= spec.qubits_per_dim
    return tuple(reversed(out))


def coords_of(spec: RegisterSpec, indices: Sequence[int]) -> np.ndarray:
    return np.array([grid_coord(spec, k) for k in indices])


def all_coords(spec: RegisterSpec) -> np.ndarray:
    """Coordinates of every flat basis index, shape ``(size, num_dims)``."""
    axes = np.meshgrid(*([axis_coords(spec)] * spec.num_dims), indexing="ij")
    return np.stack([a.reshape(-1) for a in axes], axis=-1)
