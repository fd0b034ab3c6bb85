"""Centered Fourier transforms, momentum basis changes and the momentum flip.

The centered transform on one register is ``F_c = X_0 F X_0`` where ``F`` has
kernel ``exp(+2 pi i j k / N) / sqrt(N)`` and ``X_0`` flips the most
significant qubit (an index shift by ``N/2``).  Momentum is ``p = F_c x F_c^dag``
so momentum-basis amplitudes are ``F_c^dag psi`` and carry the same
eigenvalues as the position grid.
"""
from __future__ import annotations

import enum
from functools import lru_cache

import numpy as np

from .grid import RegisterSpec
from .statevector import Statevector, _check_dim


class TransformDirection(enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


def _axis_view(state: Statevector) -> np.ndarray:
    return state.amplitudes.reshape(state.spec.shape)


def _msb_flip(arr: np.ndarray, axis: int) -> np.ndarray:
    return np.roll(arr, arr.shape[axis] // 2, axis=axis)


def centered_fourier_array(arr: np.ndarray, axis: int, inverse: bool = False) -> np.ndarray:
    """Apply ``F_c`` (or its inverse) along ``axis`` of a grid-shaped array."""
    N = arr.shape[axis]
    out = _msb_flip(arr, axis)
    if inverse:
        out = np.fft.fft(out, axis=axis) / np.sqrt(N)
    else:
        out = np.fft.ifft(out, axis=axis) * np.sqrt(N)
    return _msb_flip(out, axis)


def centered_fourier(state: Statevector, dim: int,
                     direction: TransformDirection | str = TransformDirection.FORWARD) -> Statevector:
    dim = _check_dim(state.spec, dim)
    direction = TransformDirection(direction)
    out = centered_fourier_array(_axis_view(state), dim,
                                 inverse=direction is TransformDirection.INVERSE)
    return Statevector(out.reshape(-1), state.spec)


def to_momentum_basis(state: Statevector, dim: int) -> Statevector:
    return centered_fourier(state, dim, TransformDirection.INVERSE)


def from_momentum_basis(state: Statevector, dim: int) -> Statevector:
    return centered_fourier(state, dim, TransformDirection.FORWARD)


def momentum_flip(state: Statevector) -> Statevector:
    """Apply ``F_c^dag X_msb F_c`` to every register.

    Each register is transformed with ``F_c``, its most significant bit is
    flipped, and the inverse transform is applied.  The result is an
    involution, and it is diagonal in the position basis (a ``(-1)**k``
    sign pattern), so measurement statistics in the position basis are
    unchanged by it.
    """
    arr = _axis_view(state)
    for dim in range(state.spec.num_dims):
        arr = centered_fourier_array(arr, dim)
        arr = _msb_flip(arr, dim)
        arr = centered_fourier_array(arr, dim, inverse=True)
    return Statevector(arr.reshape(-1), state.spec)


@lru_cache(maxsize=32)
def _flip_diagonal(spec: RegisterSpec) -> np.ndarray:
    rng = np.random.default_rng(0)
    probe = rng.standard_normal(spec.size) + 1j * rng.standard_normal(spec.size)
    ones = momentum_flip(Statevector(np.ones(spec.size), spec)).amplitudes
    # M is diagonal in the position basis; confirm before trusting the table
    if not np.allclose(momentum_flip(Statevector(probe, spec)).amplitudes, ones * probe, atol=1e-10):
        raise AssertionError("momentum flip is not diagonal in the position basis")
    ones.setflags(write=False)
    return ones


def momentum_flip_fast(state: Statevector) -> Statevector:
    """Same operator as :func:`momentum_flip`, applied as a cached diagonal."""
    return Statevector(state.amplitudes * _flip_diagonal(state.spec), state.spec)


def signed_frequencies(N: int) -> np.ndarray:
    """Signed integer frequency for each FFT bin (bin ``N/2`` maps to ``-N/2``)."""
    m = np.arange(N)
    return np.where(m < N // 2, m, m - N)


def kinetic_multipliers(spec: RegisterSpec, angle: float) -> np.ndarray:
    """Per-FFT-bin phases ``exp(-i angle p^2 / 2)``.

    ``F_c D F_c^dag`` is circulant because the MSB shifts commute with a
    cyclic convolution, so ``p^2`` can be applied as a plain FFT multiplier.
    """
    p = spec.spacing * signed_frequencies(spec.points_per_dim)
    return np.exp(-0.5j * angle * p**2)
