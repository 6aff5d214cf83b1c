"""Command-line frontend.

Subcommands: junction-run (one record as CSV), junction-sweep (CSV file plus
aggregate table), torus-run (2D run with optional frame dump), verify (named
self-check suites). Identical argv gives byte-identical stdout and files.
Exit codes: 0 ok, 1 failed verification or exhausted step budget, 2 usage.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import verify as verify_mod
from .analysis import find_cycle
from .errors import ResourceLimit
from .experiments import (CSV_HEADER, SweepSpec, aggregate, format_table,
                          run_experiment, sweep)
from .rng import as_fraction
from .torus import classify_run, torus_random

OUT_DIR_ENV = "BMLJUNCTION_OUT_DIR"


def _density(text: str) -> Fraction:
    try:
        p = as_fraction(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not a density: {text!r}") from exc
    if not 0 <= p <= 1:
        raise argparse.ArgumentTypeError(f"density {text} outside [0, 1]")
    return p


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from exc


def _seed_spec(text: str) -> tuple[int, ...]:
    """'30' means seeds 0..29; '4,8,15' is an explicit list."""
    if "," in text:
        return _int_list(text)
    try:
        count = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a seed spec: {text!r}") from exc
    return tuple(range(count))


def _out_dir() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV, "."))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bml-junction")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("junction-run", help="one junction run, printed as CSV")
    run.add_argument("--n", type=int, required=True)
    run.add_argument("--p", type=_density, required=True)
    run.add_argument("--seed", type=int, default=1)
    run.add_argument("--budget", type=int, default=None)

    sw = sub.add_parser("junction-sweep", help="run a seed sweep and aggregate")
    sw.add_argument("--n-list", type=_int_list, required=True)
    sw.add_argument("--p", type=_density, required=True)
    sw.add_argument("--seeds", type=_seed_spec, required=True)
    sw.add_argument("--out", type=str, default=None)
    sw.add_argument("--budget", type=int, default=None)
    sw.add_argument("--workers", type=int, default=1)

    tr = sub.add_parser("torus-run", help="2D torus run")
    tr.add_argument("--n", type=int, required=True)
    tr.add_argument("--p", type=_density, required=True)
    tr.add_argument("--seed", type=int, default=1)
    tr.add_argument("--max-turns", type=int, default=100000)
    tr.add_argument("--frames-dir", type=str, default=None)
    tr.add_argument("--frame-every", type=int, default=None)

    ver = sub.add_parser("verify", help="run a self-check suite")
    ver.add_argument("--suite", choices=("equivalence", "invariants", "theorems"),
                     required=True)
    ver.add_argument("--max-n", type=int, default=7)
    ver.add_argument("--samples", type=int, default=100)
    ver.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_junction_run(args) -> int:
    if args.n < 1:
        print("n must be positive", file=sys.stderr)
        return 2
    print(CSV_HEADER)
    rec = run_experiment(args.n, args.p, args.seed, args.budget)
    print(",".join(rec.csv_row()))
    return 0 if rec.complete else 1


def _cmd_junction_sweep(args) -> int:
    out = Path(args.out) if args.out else _out_dir() / "sweep.csv"
    spec = SweepSpec(ns=args.n_list, ps=(args.p,), seeds=args.seeds,
                     budget=args.budget, out=out)
    records = sweep(spec, workers=args.workers)
    print(f"wrote {len(records)} records to {out}")
    print(format_table(aggregate(records)))
    return 0 if all(r.complete for r in records) else 1


def _cmd_torus_run(args) -> int:
    if args.n < 1 or args.max_turns < args.n:
        print("need n >= 1 and max-turns >= n", file=sys.stderr)
        return 2
    grid = torus_random(args.n, args.p, args.seed)
    frames_dir = None
    if args.frame_every:
        frames_dir = Path(args.frames_dir) if args.frames_dir else _out_dir() / "frames"
        frames_dir.mkdir(parents=True, exist_ok=True)
    outcome = classify_run(grid, args.max_turns, frames_dir=frames_dir,
                           frame_every=args.frame_every)
    print(f"outcome={outcome.kind.value} turns={outcome.turns_elapsed} "
          f"speed={float(outcome.final_speed_estimate):.5f}")
    return 0


def _cmd_verify(args) -> int:
    if args.suite == "equivalence":
        failures = verify_mod.equivalence_suite(max_n=args.max_n,
                                                samples=args.samples, seed=args.seed)
    elif args.suite == "invariants":
        failures = verify_mod.invariants_suite(samples=args.samples,
                                               max_n=max(args.max_n, 8), seed=args.seed)
    else:
        failures = verify_mod.theorems_suite(samples=args.samples, seed=args.seed)
    if failures:
        for f in failures:
            print(f"FAIL {f}")
        return 1
    print(f"suite {args.suite}: ok")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "junction-run":
            return _cmd_junction_run(args)
        if args.command == "junction-sweep":
            return _cmd_junction_sweep(args)
        if args.command == "torus-run":
            return _cmd_torus_run(args)
        return _cmd_verify(args)
    except ResourceLimit as exc:
        print(f"resource limit: {exc} (steps={exc.steps_done})", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
