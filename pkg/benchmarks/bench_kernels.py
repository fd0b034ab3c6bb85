"""Compare the compiled Trotter kernels with the numpy fallback.

Usage::

    python benchmarks/bench_kernels.py [--steps 10] [--repeat 5]

Times ``evolve_inplace`` on several register shapes and a short QD-HMC chain
with each backend, and checks that both produce the same state.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from qdhmc import _backend, dynamics
from qdhmc.dynamics import ScheduleSampler
from qdhmc.grid import RegisterSpec
from qdhmc.samplers import run_qdhmc
from qdhmc.spectral import kinetic_multipliers
from qdhmc.targets import make_target

SHAPES = [(5, 1), (8, 1), (10, 1), (12, 1), (4, 2), (5, 2), (6, 2), (7, 2), (4, 3)]


def backends():
    out = {"python": _backend._fallback}
    if _backend.BACKEND == "cython":
        out["cython"] = _backend.kernels
    return out


def time_kernel(mod, spec, steps, repeat):
    rng = np.random.default_rng(0)
    psi0 = rng.standard_normal(spec.size) + 1j * rng.standard_normal(spec.size)
    psi0 /= np.linalg.norm(psi0)
    pot = np.exp(-1j * rng.uniform(0, 1, spec.size))
    kin = kinetic_multipliers(spec, 0.1)
    N, n = spec.points_per_dim, spec.num_dims

    def run():
        psi = psi0.copy()
        mod.evolve_inplace(psi, n, N, pot, kin, steps)
        return psi

    number = max(1, int(2e6 // (spec.size * steps)))
    best = min(timeit.repeat(run, number=number, repeat=repeat)) / number
    return best, run()


def time_chain(mod, n_samples):
    original = dynamics.kernels
    dynamics.kernels = mod
    try:
        spec = RegisterSpec(5, 2)
        start = timeit.default_timer()
        res = run_qdhmc(spec, make_target("double_well", 2), ScheduleSampler(), n_samples, seed=0)
        return timeit.default_timer() - start, res
    finally:
        dynamics.kernels = original


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=10)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--chain", type=int, default=500, help="QD-HMC steps for the end-to-end timing")
    args = parser.parse_args(argv)

    mods = backends()
    if "cython" not in mods:
        print("compiled extension not available; only the numpy fallback is timed")
    names = list(mods)
    print(f"evolve_inplace, {args.steps} Trotter steps (best of {args.repeat}), microseconds")
    print(f"{'qubits x dims':>14} {'amplitudes':>11} " + " ".join(f"{n:>10}" for n in names)
          + ("   speedup" if len(names) == 2 else ""))
    for d, n in SHAPES:
        spec = RegisterSpec(d, n)
        times, states = [], []
        for name in names:
            t, psi = time_kernel(mods[name], spec, args.steps, args.repeat)
            times.append(t)
            states.append(psi)
        if len(states) == 2 and not np.allclose(states[0], states[1], atol=1e-10):
            raise SystemExit(f"backends disagree at d={d}, n={n}")
        row = f"{f'{d} x {n}':>14} {spec.size:>11} " + " ".join(f"{t * 1e6:>10.1f}" for t in times)
        if len(times) == 2:
            row += f"   {times[0] / times[1]:>6.2f}x"
        print(row)

    print(f"\nQD-HMC chain, 2D double well, 5 qubits per dim, {args.chain} steps")
    results = {}
    for name in names:
        secs, res = time_chain(mods[name], args.chain)
        results[name] = res
        print(f"{name:>10}: {secs:.2f} s ({secs / max(args.chain, 1) * 1e3:.2f} ms/step)")
    if len(results) == 2:
        same = np.array_equal(results["python"].indices, results["cython"].indices)
        print(f"identical chains: {same}")


if __name__ == "__main__":
    main()
