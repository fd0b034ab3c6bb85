"""Brute-force dense constructions used to cross-check the matrix-free code.

Everything here is built from explicit matrices: the DFT matrix, the
most-significant-bit flip as a permutation, Kronecker products across
registers, and ordinary matrix multiplication.  Nothing calls an FFT.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SizeGuardError
from .grid import RegisterSpec, all_coords

MAX_QUBITS = 12


@dataclass(frozen=True)
class DenseUnitary:
    matrix: np.ndarray
    name: str

    def unitarity_residual(self) -> float:
        m = self.matrix
        return float(np.abs(m.conj().T @ m - np.eye(m.shape[0])).max())


def _guard(spec: RegisterSpec):
    if spec.total_qubits > MAX_QUBITS:
        raise SizeGuardError(
            f"dense construction limited to {MAX_QUBITS} qubits, register has {spec.total_qubits}"
        )


def _eigenvalues(N: int) -> np.ndarray:
    return np.sqrt(2 * np.pi / N) * (np.arange(N) - N / 2)


def _dft(N: int) -> np.ndarray:
    j = np.arange(N)
    return np.exp(2j * np.pi * np.outer(j, j) / N) / np.sqrt(N)


def _msb_x(N: int) -> np.ndarray:
    j = np.arange(N)
    X = np.zeros((N, N))
    X[j ^ (N // 2), j] = 1.0
    return X


def _embed(spec: RegisterSpec, op: np.ndarray, dim: int) -> np.ndarray:
    """Kronecker-embed a single-register operator on register ``dim``."""
    N = spec.points_per_dim
    out = np.ones((1, 1), dtype=op.dtype)
    for d in range(spec.num_dims):
        out = np.kron(out, op if d == dim else np.eye(N))
    return out


def single_centered_fourier(N: int) -> np.ndarray:
    X = _msb_x(N)
    return X @ _dft(N) @ X


def dense_position(spec: RegisterSpec, dim: int = 0) -> np.ndarray:
    _guard(spec)
    return _embed(spec, np.diag(_eigenvalues(spec.points_per_dim)), dim)


def dense_centered_fourier(spec: RegisterSpec, dim: int = 0) -> DenseUnitary:
    _guard(spec)
    return DenseUnitary(_embed(spec, single_centered_fourier(spec.points_per_dim), dim),
                        f"X0 F X0 on register {dim}")


def dense_momentum(spec: RegisterSpec, dim: int = 0) -> np.ndarray:
    _guard(spec)
    N = spec.points_per_dim
    Fc = single_centered_fourier(N)
    p = Fc @ np.diag(_eigenvalues(N)) @ Fc.conj().T
    return _embed(spec, p, dim)


def dense_momentum_flip(spec: RegisterSpec) -> DenseUnitary:
    _guard(spec)
    N = spec.points_per_dim
    Fc = single_centered_fourier(N)
    m1 = Fc.conj().T @ _msb_x(N) @ Fc
    M = np.eye(1, dtype=complex)
    for _ in range(spec.num_dims):
        M = np.kron(M, m1)
    return DenseUnitary(M, "Fc^dag X_msb Fc on every register")


def dense_kinetic(spec: RegisterSpec, angle: float) -> np.ndarray:
    """``exp(-i angle sum_d p_d^2 / 2)`` as a product of conjugated diagonals."""
    _guard(spec)
    N = spec.points_per_dim
    Fc = single_centered_fourier(N)
    one = Fc @ np.diag(np.exp(-0.5j * angle * _eigenvalues(N) ** 2)) @ Fc.conj().T
    K = np.eye(spec.size, dtype=complex)
    for d in range(spec.num_dims):
        K = _embed(spec, one, d) @ K
    return K


def dense_potential(spec: RegisterSpec, target, angle: float) -> np.ndarray:
    _guard(spec)
    f = -np.asarray(target.log_prob(all_coords(spec)), dtype=float) / target.temperature
    return np.diag(np.exp(-1j * angle * f))


def dense_trotter_unitary(spec: RegisterSpec, target, schedule) -> DenseUnitary:
    _guard(spec)
    step = dense_kinetic(spec, schedule.kinetic_angle) @ dense_potential(spec, target, schedule.potential_angle)
    U = np.eye(spec.size, dtype=complex)
    for _ in range(schedule.steps):
        U = step @ U
    if schedule.flip_momentum:
        U = dense_momentum_flip(spec).matrix @ U
    return DenseUnitary(U, f"trotter r={schedule.steps}")


def exact_proposal_matrix(spec: RegisterSpec, target, schedule) -> np.ndarray:
    """Column-stochastic ``P[y, x] = |<y|U|x>|^2``."""
    return np.abs(dense_trotter_unitary(spec, target, schedule).matrix) ** 2


def metropolis_transition_matrix(P: np.ndarray, energies: np.ndarray) -> np.ndarray:
    """Full Metropolis kernel ``T[y, x]`` from a column-stochastic proposal."""
    energies = np.asarray(energies, dtype=float)
    acc = np.minimum(1.0, np.exp(np.minimum(0.0, energies[None, :] - energies[:, None])))
    T = P * acc
    np.fill_diagonal(T, 0.0)
    T[np.diag_indices_from(T)] = 1.0 - T.sum(axis=0)
    return T


def exact_grid_boltzmann(spec: RegisterSpec, target) -> np.ndarray:
    _guard(spec)
    lp = np.asarray(target.log_prob(all_coords(spec)), dtype=float) / target.temperature
    w = np.exp(lp - lp.max())
    return w / w.sum()
