#!/usr/bin/env python3
"""Randomized bound-sandwich validation sweep over many master seeds.

Usage: python scripts/validate_bounds.py [--trials 200] [--seeds 10]

Exits nonzero if any sandwich check fails across all master seeds; use
this to stress the bound catalogue harder than the single-seed CLI
`hybridcond validate` run.
"""

import argparse
import sys

from hybridcond.validation import run_sandwich_suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--seeds", type=int, default=10)
    args = parser.parse_args()
    total = 0
    for seed in range(args.seeds):
        violations = run_sandwich_suite(trials=args.trials, seed=seed)
        total += len(violations)
        status = "ok" if not violations else f"{len(violations)} VIOLATIONS"
        print(f"seed {seed}: {status}")
        for line in violations:
            print(f"  {line}")
    print(f"{args.seeds * args.trials} trials total, {total} violations")
    return 0 if total == 0 else 4


if __name__ == "__main__":
    sys.exit(main())
