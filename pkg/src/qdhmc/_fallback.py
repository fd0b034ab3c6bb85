"""Pure-numpy versions of the compiled kernels in ``_kernels.pyx``."""
import numpy as np


def _check(psi, num_dims, N, kin_phase):
    if psi.dtype != np.complex128 or not psi.flags.c_contiguous:
        raise TypeError("psi must be a contiguous complex128 array")
    if N < 1 or N & (N - 1):
        raise ValueError(f"points per register must be a power of two, got {N}")
    if num_dims < 1 or psi.shape[0] != N**num_dims:
        raise ValueError(f"state size {psi.shape[0]} != {N}**{num_dims}")
    if np.shape(kin_phase) != (N,):
        raise ValueError(f"kinetic phase needs {N} entries, got {np.size(kin_phase)}")


def kinetic_inplace(psi, num_dims, N, kin_phase):
    _check(psi, num_dims, N, kin_phase)
    view = psi.reshape((N,) * num_dims)
    for axis in range(num_dims):
        shape = [1] * num_dims
        shape[axis] = N
        view[...] = np.fft.ifft(
            np.fft.fft(view, axis=axis) * kin_phase.reshape(shape), axis=axis
        )


def evolve_inplace(psi, num_dims, N, pot_phase, kin_phase, steps):
    _check(psi, num_dims, N, kin_phase)
    if np.shape(pot_phase) != psi.shape:
        raise ValueError("potential phase and state sizes differ")
    for _ in range(steps):
        psi *= pot_phase
        kinetic_inplace(psi, num_dims, N, kin_phase)
