# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled split-operator kernels.

Mirrors :mod:`qdhmc._fallback`; the state is a flat complex128 buffer holding
``num_dims`` registers of ``N`` points each (dimension 0 slowest).  Complex
values are handled as interleaved (re, im) doubles.
"""
import numpy as np

from libc.math cimport cos, sin, M_PI
from libc.stdlib cimport malloc, free


cdef struct Plan:
    Py_ssize_t n
    Py_ssize_t* rev
    double* twr      # cos(2 pi k / n)
    double* twi      # -sin(2 pi k / n), forward sign
    double* br       # line buffer, real parts
    double* bi       # line buffer, imaginary parts


cdef int _plan_init(Plan* p, Py_ssize_t n) except -1:
    cdef Py_ssize_t i, j, k, bits = 0, half = n // 2 if n > 1 else 1
    cdef double ang
    p.n = n
    p.rev = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
    p.twr = <double*> malloc(half * sizeof(double))
    p.twi = <double*> malloc(half * sizeof(double))
    p.br = <double*> malloc(n * sizeof(double))
    p.bi = <double*> malloc(n * sizeof(double))
    if p.rev == NULL or p.twr == NULL or p.twi == NULL or p.br == NULL or p.bi == NULL:
        _plan_free(p)
        raise MemoryError()
    while (1 << bits) < n:
        bits += 1
    for i in range(n):
        j = 0
        for k in range(bits):
            if i & (1 << k):
                j |= 1 << (bits - 1 - k)
        p.rev[i] = j
    for i in range(n // 2):
        ang = 2.0 * M_PI * i / n
        p.twr[i] = cos(ang)
        p.twi[i] = -sin(ang)
    return 0


cdef void _plan_free(Plan* p) noexcept:
    free(p.rev)
    free(p.twr)
    free(p.twi)
    free(p.br)
    free(p.bi)


cdef inline void _butterflies(double* ar, double* ai, const Plan* p, double sign) noexcept nogil:
    # input already in bit-reversed order; sign=+1 forward (e^-), -1 inverse (e^+)
    cdef Py_ssize_t n = p.n, length = 2, half, step, start, k, a, b
    cdef double wr, wi, vr, vi, ur, ui
    while length <= n:
        half = length >> 1
        step = n // length
        start = 0
        while start < n:
            for k in range(half):
                wr = p.twr[k * step]
                wi = sign * p.twi[k * step]
                a = start + k
                b = a + half
                vr = ar[b] * wr - ai[b] * wi
                vi = ar[b] * wi + ai[b] * wr
                ur = ar[a]
                ui = ai[a]
                ar[a] = ur + vr
                ai[a] = ui + vi
                ar[b] = ur - vr
                ai[b] = ui - vi
            start += length
        length <<= 1


cdef void _kinetic(double* psi, Py_ssize_t total, Py_ssize_t num_dims,
                   const double* kin, Plan* p) noexcept nogil:
    # kin is interleaved and already carries the 1/N of the inverse transform
    cdef Py_ssize_t N = p.n
    cdef Py_ssize_t axis, stride, outer, o, s, m, base, idx, r
    cdef double* br = p.br
    cdef double* bi = p.bi
    cdef double xr, xi, kr, ki
    for axis in range(num_dims):
        stride = 1
        for m in range(num_dims - 1 - axis):
            stride *= N
        outer = total // (stride * N)
        for o in range(outer):
            for s in range(stride):
                base = o * stride * N + s
                for m in range(N):
                    idx = 2 * (base + m * stride)
                    r = p.rev[m]
                    br[r] = psi[idx]
                    bi[r] = psi[idx + 1]
                _butterflies(br, bi, p, 1.0)
                # multiply, then permute into bit-reversed order for the inverse pass
                for m in range(N):
                    kr = kin[2 * m]
                    ki = kin[2 * m + 1]
                    xr = br[m] * kr - bi[m] * ki
                    xi = br[m] * ki + bi[m] * kr
                    idx = 2 * (base + p.rev[m] * stride)
                    psi[idx] = xr
                    psi[idx + 1] = xi
                for m in range(N):
                    idx = 2 * (base + m * stride)
                    br[m] = psi[idx]
                    bi[m] = psi[idx + 1]
                _butterflies(br, bi, p, -1.0)
                for m in range(N):
                    idx = 2 * (base + m * stride)
                    psi[idx] = br[m]
                    psi[idx + 1] = bi[m]


def _as_doubles(arr):
    return np.ascontiguousarray(arr, dtype=np.complex128).view(np.float64)


cdef _check(psi, Py_ssize_t num_dims, Py_ssize_t N, Py_ssize_t kin_len):
    if psi.dtype != np.complex128 or not psi.flags.c_contiguous:
        raise TypeError("psi must be a contiguous complex128 array")
    if N < 1 or N & (N - 1):
        raise ValueError(f"points per register must be a power of two, got {N}")
    if num_dims < 1 or psi.shape[0] != N ** num_dims:
        raise ValueError(f"state size {psi.shape[0]} != {N}**{num_dims}")
    if kin_len != 2 * N:
        raise ValueError(f"kinetic phase needs {N} entries, got {kin_len // 2}")


def kinetic_inplace(psi, Py_ssize_t num_dims, Py_ssize_t N, kin_phase):
    """Multiply by ``kin_phase`` in the Fourier basis of every register."""
    cdef double[::1] state = psi.view(np.float64)
    cdef double[::1] kin = _as_doubles(np.asarray(kin_phase) / N)
    cdef Plan p
    _check(psi, num_dims, N, kin.shape[0])
    _plan_init(&p, N)
    with nogil:
        _kinetic(&state[0], state.shape[0] // 2, num_dims, &kin[0], &p)
    _plan_free(&p)


def evolve_inplace(psi, Py_ssize_t num_dims, Py_ssize_t N, pot_phase, kin_phase, Py_ssize_t steps):
    """Apply ``steps`` repetitions of (potential phase, then kinetic phase)."""
    cdef double[::1] state = psi.view(np.float64)
    cdef double[::1] pot = _as_doubles(pot_phase)
    cdef double[::1] kin = _as_doubles(np.asarray(kin_phase) / N)
    cdef Py_ssize_t r, i, total = state.shape[0] // 2
    cdef double xr, xi
    cdef Plan p
    _check(psi, num_dims, N, kin.shape[0])
    if pot.shape[0] != state.shape[0]:
        raise ValueError("potential phase and state sizes differ")
    _plan_init(&p, N)
    with nogil:
        for r in range(steps):
            for i in range(total):
                xr = state[2 * i] * pot[2 * i] - state[2 * i + 1] * pot[2 * i + 1]
                xi = state[2 * i] * pot[2 * i + 1] + state[2 * i + 1] * pot[2 * i]
                state[2 * i] = xr
                state[2 * i + 1] = xi
            _kinetic(&state[0], total, num_dims, &kin[0], &p)
    _plan_free(&p)
