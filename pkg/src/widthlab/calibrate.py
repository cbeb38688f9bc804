"""Fit registry constants on a grid of exact values.

The fitted pair for a tag is the tightest (c_low, c_high) with
c_low * shape <= exact <= c_high * shape over the grid. These are empirical
and are written as ``calibrated``; nothing downstream treats them as proven.
"""

from __future__ import annotations

import math

from .approx import approx_number, log_ratio_shape, regime_of
from .constants import _fmt
from .errors import PreconditionError
from .gevrey import _gevrey_shape
from .weights import gevrey, isotropic, parse_p


def _iso_shape(s, p, d, n):
    regime = regime_of(n, d)
    if regime == "pre-d":
        return 1.0
    if regime == "preasymptotic":
        return log_ratio_shape(n, d) ** (-s / p)
    return d ** (-s / p) * n ** (-s / d)


def _key(tag: str, **params) -> str:
    return f"{tag}[{','.join(f'{k}={_fmt(v)}' for k, v in sorted(params.items()))}]"


def calibrate(grid: dict) -> dict:
    """``grid`` maps a tag to a list of {params..., "d": [...], "n": [...]} blocks."""
    registry, rows = {}, 0
    for tag, blocks in sorted(grid.items()):
        for blk in blocks:
            ratios = []
            dims, ns = blk["d"], blk["n"]
            if tag == "iso_regime":
                s, p = float(blk["s"]), parse_p(blk["p"])
                for d in dims:
                    spec = isotropic(s, p, d)
                    for n in ns:
                        ratios.append(approx_number(spec, n).value / _iso_shape(s, p, d, n))
                key = _key(tag, s=s, p=p)
            elif tag == "gevrey_regime":
                a, b, p = float(blk["alpha"]), float(blk["beta"]), parse_p(blk["p"])
                for d in dims:
                    spec = gevrey(a, b, p, d)
                    for n in ns:
                        if n < 2:
                            continue
                        shape = b * _gevrey_shape(a, p, d, n, regime_of(n, d))
                        ratios.append(approx_number(spec, n).neg_log / shape)
                key = _key(tag, alpha=a, p=p)
            else:
                raise PreconditionError(f"calibration is not defined for tag {tag!r}")
            if not ratios or not all(math.isfinite(r) for r in ratios):
                raise PreconditionError(f"calibration block for {key} produced no finite ratios")
            rows += len(ratios)
            where = f"d={min(dims)}..{max(dims)}, n={min(ns)}..{max(ns)}, points={len(ratios)}"
            registry[key] = {"c_low": min(ratios), "c_high": max(ratios), "calibrated_on": where}
    return {"registry": registry, "points": rows}
