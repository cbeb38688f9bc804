#!/usr/bin/env python3
"""Normalised approximation numbers along a log grid, as CSV.

For Isotropic specs the series is n^(s/d) a_n against vol(B_p^d)^(s/d); for
Gevrey specs it is a_n exp(beta vol^(-alpha/d) n^(alpha/d)) against 1.
"""

import argparse
import csv
import math
import sys
from dataclasses import dataclass

from widthlab.approx import limit_diagnostic
from widthlab.weights import gevrey, isotropic, parse_p


@dataclass
class SeriesConfig:
    kind: str = "iso"
    s: float = 1.0
    alpha: float = 0.5
    beta: float = 1.0
    p: float = 1.0
    d: int = 2
    n_max: int = 10**6
    per_decade: int = 4

    def spec(self):
        if self.kind == "iso":
            return isotropic(self.s, self.p, self.d)
        return gevrey(self.alpha, self.beta, self.p, self.d)

    def grid(self):
        top = round(self.per_decade * math.log10(self.n_max))
        return sorted({max(1, round(10 ** (k / self.per_decade))) for k in range(top + 1)})


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", choices=("iso", "gevrey"), default="iso")
    ap.add_argument("--s", type=float, default=1.0)
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--p", default="1")
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=10**6)
    a = ap.parse_args()
    cfg = SeriesConfig(a.kind, a.s, a.alpha, a.beta, parse_p(a.p), a.d, a.n_max)
    rep = limit_diagnostic(cfg.spec(), cfg.grid())
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "normalised", "target", "rel_error"])
    for n, val, target in rep.rows:
        w.writerow([n, f"{val:.17g}", f"{target:.17g}", f"{abs(val / target - 1):.6e}"])
    print(f"# verdict={rep.verdict} strict_hypotheses={rep.strict}", file=sys.stderr)


if __name__ == "__main__":
    main()
