"""Command-line entry point: ``qdhmc run|sweep|snapshot``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from ._backend import BACKEND
from .errors import QDHMCError
from .experiments import ExperimentConfig, run_experiment, snapshot_wavefunction, sweep


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON experiment config")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output directory")
    p.add_argument("--sampler", choices=["qdhmc", "hmc"])
    p.add_argument("--target")
    p.add_argument("--dim", type=int)
    p.add_argument("--qubits", type=int, dest="qubits_per_dim", help="qubits per dimension")
    p.add_argument("--temps", type=_floats, dest="temperatures", help="comma-separated temperatures")
    p.add_argument("--samples", type=int, dest="n_samples")
    p.add_argument("--reps", type=int, dest="repetitions")
    p.add_argument("--workers", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdhmc", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run repeated chains and write traces + summary")
    _common(run)

    sw = sub.add_parser("sweep", help="rank hyperparameter settings")
    _common(sw)
    sw.add_argument("--param", action="append", default=[], metavar="PATH=JSON",
                    help='e.g. hmc.step_size=[0.01,0.1,1.0] or schedule.eta={"low":0.5,"high":2}')
    sw.add_argument("--metric", choices=["energy", "tau"], default="energy")
    sw.add_argument("--mode", choices=["grid", "random"], default="grid")
    sw.add_argument("--n-random", type=int, default=10)

    snap = sub.add_parser("snapshot", help="dump per-Trotter-step probability grids")
    _common(snap)
    snap.add_argument("--start", type=_floats, required=True, help="comma-separated start coordinates")
    snap.add_argument("--time", type=float, default=2.0)
    snap.add_argument("--steps", type=int, default=10)
    snap.add_argument("--eta", type=float, default=1.0)
    snap.add_argument("--lam", type=float, default=1.0)
    snap.add_argument("--flip", action="store_true", help="apply the momentum flip after the last step")
    return parser


_OVERRIDES = ("seed", "out", "sampler", "target", "dim", "qubits_per_dim", "temperatures",
              "n_samples", "repetitions", "workers")


def load_config(args) -> ExperimentConfig:
    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
    for key in _OVERRIDES:
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    return ExperimentConfig.from_dict(data)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args)
        if args.command == "run":
            res = run_experiment(config)
            for row in res.summary["temperatures"]:
                print(f"T={row['temperature']:g} acceptance={row['acceptance_mean']} "
                      f"tau={row['tau_mean']} best_energy={row['best_energy']}")
            print(f"wrote {config.out} (backend={BACKEND})")
        elif args.command == "sweep":
            grid = {}
            for item in args.param:
                name, sep, value = item.partition("=")
                if not sep:
                    raise QDHMCError(f"--param expects PATH=VALUES, got {item!r}")
                value = _parse_value(value)
                grid[name] = value if isinstance(value, (list, dict)) else [value]
            ranked = sweep(config, grid, metric=args.metric, mode=args.mode, n_random=args.n_random)
            for entry in ranked["ranking"]:
                print(f"{entry['rank']:>3} {entry['metric']:.6g} {json.dumps(entry['params'])}")
        else:
            frames = snapshot_wavefunction(config, args.start, args.time, args.steps, args.eta,
                                           args.lam, flip_momentum=args.flip)
            print(f"wrote {len(frames)} snapshots to {config.out}")
    except (QDHMCError, OSError, json.JSONDecodeError) as exc:
        print(f"qdhmc: error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        print("qdhmc: interrupted; partial results written", file=sys.stderr)
        return 130
    return 0


if __name__ == "__main__":
    sys.exit(main())
