"""Gevrey-type weights: bound surfaces, the embedding into H^{s,p}, and the
comparison with dominating mixed smoothness."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .approx import ApproxNumberResult, BoundPair, approx_number, log_ratio_shape, regime_of
from .constants import DEFAULT_CONSTANTS, BoundConstants
from .entropy import entropy_bounds
from .errors import NonMonotoneProfileError, PreconditionError
from .weights import format_p, gevrey, isotropic, mixed, ratio


@dataclass(frozen=True)
class GevreyBoundReport:
    n: int
    d: int
    alpha: float
    beta: float
    p: float
    regime: str
    minus_log_an: BoundPair
    reference: BoundPair
    quasi_poly_exponent: Optional[float] = None
    s: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "n": str(self.n),
            "d": self.d,
            "alpha": self.alpha,
            "beta": self.beta,
            "p": format_p(self.p),
            "regime": self.regime,
            "minus_log_an": self.minus_log_an.to_json(),
            "reference": self.reference.to_json(),
            "quasi_poly_exponent": self.quasi_poly_exponent,
        }


def _gevrey_shape(alpha: float, p: float, d: int, n: int, regime: str) -> float:
    ap = 0.0 if math.isinf(p) else alpha / p
    if regime == "pre-d":
        return 1.0
    if regime == "preasymptotic":
        return log_ratio_shape(n, d) ** ap
    return d**ap * math.exp(alpha / d * math.log(n))


def gevrey_bounds(
    alpha: float, beta: float, p: float, d: int, n: int, constants: BoundConstants = DEFAULT_CONSTANTS
) -> GevreyBoundReport:
    """Certified interval on -ln a_n plus the regime reference curve."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    regime = regime_of(n, d)
    if n == 1:
        cert = BoundPair(0.0, 0.0, "initial-error")
    else:
        est = entropy_bounds(n, d, p)
        lo = beta * (1.0 / (4.0 * est.upper)) ** alpha
        hi = beta * (2.0 / est.lower) ** alpha
        cert = BoundPair(lo, hi, "generalized-characterization", {"entropy": dict(est.provenance)})
    c = constants.get("gevrey_regime", alpha=alpha, p=p)
    shape = beta * _gevrey_shape(alpha, p, d, n, regime)
    ref = BoundPair(c.c_low * shape, c.c_high * shape, f"gevrey-{regime}-reference", c.to_json(), False)
    qpe = None
    if alpha == p and n >= 2:
        qpe = beta / math.log2(1.0 + d / math.log2(n))
    return GevreyBoundReport(n, d, alpha, beta, p, regime, cert, ref, qpe)


def gevrey_hs_spec(alpha: float, beta: float, s: float, p: float, d: int):
    if s > beta * alpha:
        raise NonMonotoneProfileError(f"embedding needs s <= beta*alpha, got s={s:g} > {beta * alpha:g}")
    return ratio(gevrey(alpha, beta, p, d), isotropic(s, p, d))


def gevrey_to_hs(alpha: float, beta: float, s: float, p: float, d: int, n: int) -> ApproxNumberResult:
    """Exact a_n(Id: G^{alpha,beta,p} -> H^{s,p}) through the quotient weight."""
    res = approx_number(gevrey_hs_spec(alpha, beta, s, p, d), n)
    return ApproxNumberResult(res.n, res.value, f"Hs({s:g})", res.exact, res.lower, res.upper, res.neg_log)


def gevrey_hs_reference(
    alpha: float, beta: float, s: float, p: float, d: int, n: int, constants: BoundConstants = DEFAULT_CONSTANTS
) -> BoundPair:
    """Reference curve for a_n into H^{s,p} (regime shapes, uncalibrated constants)."""
    regime = regime_of(n, d)
    c = constants.get("gevrey_hs_corollary", alpha=alpha, p=p, s=s)
    ap = 0.0 if math.isinf(p) else alpha / p
    if regime == "pre-d":
        val = 1.0
    elif regime == "preasymptotic":
        lam = log_ratio_shape(n, d)
        val = math.exp(s * math.log(lam) + 1.0 - beta * lam**ap)
    else:
        val = math.exp(-s * math.log(d) - s / d * math.log(n) + 1.0 - beta * d**ap * n ** (alpha / d))
    return BoundPair(c.c_low * val, c.c_high * val, f"gevrey-hs-{regime}-reference", c.to_json(), False)


def ksu15_reference(s: float, d: int, n: int) -> tuple[Optional[float], Optional[float]]:
    """Quoted two-sided mixed-smoothness estimate (p = 1), valid for 1 <= n <= 4^d."""
    if n > 4**d:
        return None, None
    if n == 1:
        return 2.0**-s, math.e ** (2 * s / (2.0 + math.log2(d)))
    ln = math.log2(n)
    denom = math.log2(0.5 + d / ln)
    lower = 2.0**-s * (1.0 / (2 * n)) ** (s / denom) if denom > 0 else None
    upper = (math.e**2 / n) ** (s / (2.0 + math.log2(d)))
    return lower, upper


def mixed_vs_gevrey_compare(s: float, d: int, n_grid: Sequence[int]) -> list[dict]:
    """Per n: exact a_n for Mixed(s, 1) and Gevrey(1, s, 1), plus reference curves."""
    if not n_grid:
        raise PreconditionError("n_grid must be nonempty")
    mspec, gspec = mixed(s, 1, d), gevrey(1, s, 1, d)
    rows = []
    for n in n_grid:
        am = approx_number(mspec, int(n)).value
        ag = approx_number(gspec, int(n)).value
        lo, hi = ksu15_reference(s, d, int(n))
        rows.append(
            {
                "n": int(n),
                "a_mixed": am,
                "a_gevrey": ag,
                "ksu15_lower": lo,
                "ksu15_upper": hi,
                "ratio": ag / am,
                "dominated": ag <= am,
            }
        )
    return rows
