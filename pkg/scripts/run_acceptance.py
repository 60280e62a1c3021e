#!/usr/bin/env python3
"""Run the acceptance suite and write its JSON report.

Usage:
    python scripts/run_acceptance.py [--out report.json] [--criteria 1,2,9]
"""

import argparse
import json
import sys

from assouad import acceptance


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="acceptance_report.json")
    parser.add_argument("--criteria", default=None)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    selected = [int(t) for t in args.criteria.split(",")] if args.criteria else None
    report = acceptance.run_all(selected=selected, seed=args.seed)
    with open(args.out, "w", encoding="utf-8") as handle:
        json.dump(report, handle, indent=2, sort_keys=True, default=str)
        handle.write("\n")
    print(f"report written to {args.out}")
    return 0 if report["all_passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
