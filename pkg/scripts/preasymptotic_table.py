#!/usr/bin/env python3
"""Exact a_n against the regime reference curves for Isotropic weights.

Walks n over powers of two up to 2^d (and a little beyond) for several d and
prints exact / reference, which shows how far the uncalibrated shapes sit from
the truth in each regime.
"""

import argparse
import csv
import sys
from dataclasses import dataclass, field

from widthlab.approx import approx_number, regime_bounds_iso
from widthlab.weights import isotropic, parse_p


@dataclass
class TableConfig:
    s: float = 1.0
    p: float = 1.0
    dims: list = field(default_factory=lambda: [4, 8, 16, 32])
    extra_bits: int = 4


def rows(cfg: TableConfig):
    for d in cfg.dims:
        spec = isotropic(cfg.s, cfg.p, d)
        for j in range(0, min(d, 40) + cfg.extra_bits + 1):
            n = 2**j
            try:
                exact = approx_number(spec, n).value
            except Exception as exc:  # ceiling hit: report and move on
                print(f"# d={d} n=2^{j}: {exc}", file=sys.stderr)
                break
            regime, bp = regime_bounds_iso(cfg.s, cfg.p, d, n)
            yield d, n, regime, exact, bp.lower, exact / bp.lower, bp.certified


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s", type=float, default=1.0)
    ap.add_argument("--p", default="1")
    ap.add_argument("--dims", default="4,8,16,32")
    a = ap.parse_args()
    cfg = TableConfig(a.s, parse_p(a.p), [int(x) for x in a.dims.split(",")])
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["d", "n", "regime", "a_n", "reference", "ratio", "certified"])
    for d, n, regime, exact, ref, ratio, cert in rows(cfg):
        w.writerow([d, n, regime, f"{exact:.17g}", f"{ref:.17g}", f"{ratio:.6g}", cert])


if __name__ == "__main__":
    main()
