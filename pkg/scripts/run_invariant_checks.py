#!/usr/bin/env python3
"""Run every invariant check suite and exit nonzero on any violation."""
import argparse
import sys

from vigap.cli import CHECK_SUITES, check_invariants


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("suites", nargs="*", default=sorted(CHECK_SUITES))
    args = ap.parse_args()
    ok = True
    for suite in args.suites:
        report = check_invariants(suite, seed=args.seed)
        print(report.render())
        print()
        ok = ok and report.passed
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
