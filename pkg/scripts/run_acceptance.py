#!/usr/bin/env python3
"""Run the full acceptance suite and print the report.

Usage: python scripts/run_acceptance.py [--seed N] [--json out.json]
"""
import argparse
import sys

from graphcorr.suite import run_all


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--json", metavar="PATH")
    args = ap.parse_args()
    report = run_all(seed=args.seed)
    print(report.render(), end="")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    sys.exit(report.exit_code())


if __name__ == "__main__":
    main()
