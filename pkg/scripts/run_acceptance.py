#!/usr/bin/env python3
"""Print the acceptance table (criteria 1-11) and check determinism (12).

Usage: python scripts/run_acceptance.py [--quick]
"""

import argparse
import io
import sys

from widthlab.cli import run


def table(quick: bool) -> str:
    out = io.StringIO()
    argv = ["--output", "csv", "acceptance"] + (["--quick"] if quick else [])
    if run(argv, out) != 0:
        sys.exit("acceptance run failed")
    return out.getvalue()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    first = table(args.quick)
    second = table(args.quick)
    print(first, end="")
    same = first == second
    print(f"12,{'PASS' if same else 'FAIL'},two runs byte-identical: {same}")
    failed = [r for r in first.splitlines()[1:] if ",PASS," not in r]
    sys.exit(1 if failed or not same else 0)


if __name__ == "__main__":
    main()
