#!/usr/bin/env python3
"""Reproduce the junction density tables (speed / segments vs n).

Defaults run a reduced grid that finishes in minutes on one core; pass
--full for the n up to 50000 grid (hours). One CSV per density is written
next to the printed aggregate table.

Usage:
    python scripts/reproduce_tables.py --out-dir results/
    python scripts/reproduce_tables.py --p 0.52 --seeds 10
"""

import argparse
import sys
import time
from pathlib import Path

from bmljunction import SweepSpec, aggregate, as_fraction, format_table, sweep

REDUCED_NS = (1000, 2000)
FULL_NS = (1000, 5000, 10000, 50000)
DENSITIES = ("0.48", "0.5", "0.52")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", action="append", choices=DENSITIES,
                    help="density to run (repeatable; default: all three)")
    ap.add_argument("--seeds", type=int, default=30, help="seeds per cell")
    ap.add_argument("--full", action="store_true", help="paper-scale n grid")
    ap.add_argument("--out-dir", type=Path, default=Path("."))
    args = ap.parse_args()

    ns = FULL_NS if args.full else REDUCED_NS
    densities = args.p or list(DENSITIES)
    args.out_dir.mkdir(parents=True, exist_ok=True)

    for ptext in densities:
        p = as_fraction(ptext)
        out = args.out_dir / f"table_p{ptext.replace('.', '')}.csv"
        t0 = time.time()
        records = sweep(SweepSpec(ns=ns, ps=(p,), seeds=tuple(range(args.seeds)),
                                  out=out))
        print(f"\np = {ptext}  ({len(records)} runs, {time.time() - t0:.0f}s, "
              f"CSV: {out})")
        print(format_table(aggregate(records)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
