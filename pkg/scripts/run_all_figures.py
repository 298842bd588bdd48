#!/usr/bin/env python3
"""Run every figure preset end to end and report the written CSVs.

Usage: python scripts/run_all_figures.py [OUT_DIR] [--threads N]

The heavy presets (fig5 at m=400, the CG studies) take a few minutes in
total at the default n=500 scale.
"""

import argparse
import sys
import time

from hybridcond.config import FIGURE_PRESETS
from hybridcond.experiments import run_figure


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", nargs="?", default="runs")
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()
    for figure_id in sorted(FIGURE_PRESETS):
        t0 = time.perf_counter()
        paths = run_figure(figure_id, args.out, threads=args.threads)
        dt = time.perf_counter() - t0
        print(f"{figure_id}: {len(paths)} CSVs in {dt:.1f}s")
        for path in paths:
            print(f"  {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
