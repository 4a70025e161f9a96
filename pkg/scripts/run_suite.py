#!/usr/bin/env python3
"""Run the full acceptance matrix and print the structured report.

Usage:
    python scripts/run_suite.py [--seed N] [--p-max CAP] [--table]
"""

import argparse
import sys
import time

sys.path.insert(0, "src")

from bgl.report import to_table, to_text
from bgl.suite import run_suite


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=20240801)
    ap.add_argument("--p-max", type=float, default=200.0, dest="p_max")
    ap.add_argument("--table", action="store_true")
    args = ap.parse_args()

    t0 = time.time()
    report = run_suite(seed=args.seed, p_max=args.p_max)
    elapsed = time.time() - t0
    sys.stdout.write(to_table(report) if args.table else to_text(report))
    print(f"# wall time {elapsed:.1f}s", file=sys.stderr)
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
