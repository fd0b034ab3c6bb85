"""Shared test helpers."""
import numpy as np

from qdhmc.statevector import from_wavefunction


def random_state(spec, rng):
    v = rng.standard_normal(spec.size) + 1j * rng.standard_normal(spec.size)
    return from_wavefunction(spec, v)
