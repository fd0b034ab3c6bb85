"""Quantum dynamical Hamiltonian Monte Carlo on simulated qubit registers."""
from ._backend import BACKEND
from .dynamics import ScheduleSampler, TrotterSchedule, sample_schedule, trotter_evolve
from .grid import RegisterSpec
from .samplers import HMC, QDHMC, ChainResult, HmcParams, run_hmc, run_qdhmc
from .statevector import Statevector, basis_state
from .targets import Target, make_target

__all__ = [
    "BACKEND", "ChainResult", "HMC", "HmcParams", "QDHMC", "RegisterSpec",
    "ScheduleSampler", "Statevector", "Target", "TrotterSchedule", "basis_state",
    "make_target", "run_hmc", "run_qdhmc", "sample_schedule", "trotter_evolve",
]

__version__ = "0.1.0"
