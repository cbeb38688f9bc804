"""Approximation numbers of diagonal embeddings H^w(T^d) -> L_2 / L_inf.

a_n into L_2 is the n-th largest value of 1/w. Frequencies are never
materialised one by one: the lattice is grouped into shells of equal level
with exact multiplicities, and the n-th value is read off the cumulative
counts. A shell table is valid for rank n once the n-th value is at least the
certified bound on every frequency beyond the table.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from .constants import DEFAULT_CONSTANTS, BoundConstants
from .entropy import entropy_bounds, entropy_exact_linf
from .errors import (
    CountCeilingError,
    DivergentTailError,
    NonMonotoneProfileError,
    NotRadialError,
    PreconditionError,
)
from .lattice import DEFAULT_CEILING, adjusted_radii, log_volume_pball, mixed_shells, pball_shells, volume_pball
from .weights import (
    WeightSpec,
    evaluate_many,
    is_integer_p,
    level_profile,
    log_level_profile,
    mixed_profile,
    phi_of,
)

log = logging.getLogger(__name__)

MAX_SHELL_BUDGET = 60_000_000
NEAR_TIE = 1e-12


@dataclass(frozen=True)
class BoundPair:
    lower: float
    upper: float
    provenance: str
    constants_used: dict = field(default_factory=dict)
    certified: bool = True

    def contains(self, x: float, rel: float = 0.0) -> bool:
        return self.lower * (1 - rel) <= x <= self.upper * (1 + rel)

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "provenance": self.provenance,
            "constants": dict(self.constants_used),
            "certified": self.certified,
        }


@dataclass(frozen=True)
class ApproxNumberResult:
    n: int
    value: float
    target: str = "L2"
    exact: bool = True
    lower: Optional[float] = None
    upper: Optional[float] = None
    neg_log: Optional[float] = None

    def __post_init__(self):
        if self.lower is None:
            object.__setattr__(self, "lower", self.value)
        if self.upper is None:
            object.__setattr__(self, "upper", self.value)

    def to_json(self) -> dict:
        return {
            "n": str(self.n),
            "target": self.target,
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
        }


# rearrangement view ---------------------------------------------------------------

class RearrangementView:
    """Non-increasing rearrangement of ``1/w`` backed by exact shell counts."""

    def __init__(self, spec: WeightSpec, ceiling: int = DEFAULT_CEILING):
        self.spec = spec
        self.ceiling = ceiling
        self.d = spec.d
        if spec.kind == "Mixed":
            if not is_integer_p(spec.p):
                raise PreconditionError("exact mixed rearrangement needs integer p")
            self.mixed = True
            self.value_of = mixed_profile(spec)
            self.log_of = log_level_profile(spec)
            self.monotone, self.level_floor = True, 1.0
        else:
            if not spec.is_radial:
                raise NotRadialError("rearrangement needs a radial or mixed weight")
            self.mixed = False
            self.p = spec.norm_p
            self.value_of = level_profile(spec)
            self.log_of = log_level_profile(spec)
            self.monotone, self.level_floor = self._monotonicity()
        self.exact_levels = self.mixed or math.isinf(self.p) or is_integer_p(self.p)
        self.limit = None
        self._build(self._initial_limit())

    def _monotonicity(self):
        kind = self.spec.kind
        if kind in ("Isotropic", "Gevrey"):
            return True, 0.0
        if kind == "Ratio":
            phi_of(self.spec)  # raises for quotients that never become monotone
            return False, 1.0
        phi = self.spec.phi
        if not phi.monotone:
            raise NonMonotoneProfileError(f"profile {phi.descriptor} is not monotone")
        t0 = float(phi.monotone_from)
        if t0 <= 0:
            return True, 0.0
        return False, t0 if math.isinf(self.p) else t0**self.p

    # construction -------------------------------------------------------------
    def _initial_limit(self, n: int = 64) -> float:
        if self.mixed:
            return 8.0
        p, d = self.p, self.d
        r = max(1.0, math.exp((math.log(2 * n) - log_volume_pball(p, d)) / d))
        u = r if math.isinf(p) else r**p
        return max(u, self.level_floor, 1.0)

    def _build(self, limit: float):
        dense = self.mixed or math.isinf(self.p)
        if (dense and limit > MAX_SHELL_BUDGET) or (self.exact_levels and limit > 2.0**52):
            raise CountCeilingError(f"shell table up to level {limit:.3g} exceeds the working budget")
        if self.mixed:
            sh = mixed_shells(self.spec.p, self.d, limit)
        else:
            sh = pball_shells(self.p, self.d, limit)
        levels = sh.levels.tolist()
        logw = np.array([self.log_of(u) for u in levels])
        mults = sh.mults
        if self.monotone:
            order = None
        else:
            order = np.argsort(logw, kind="stable")
            logw = logw[order]
            levels = [levels[i] for i in order.tolist()]
            mults = [mults[i] for i in order.tolist()]
        cum = list(itertools.accumulate(mults))
        total = cum[-1] if cum else 0
        if total > self.ceiling:
            raise CountCeilingError(f"shell table holds {total} frequencies, above the ceiling")
        self.cum = np.array(cum, dtype=np.int64) if total < 2**62 else np.array(cum, dtype=object)
        self.levels = levels
        self.mults = mults
        self.logw = logw
        self.log_out = self.log_of(sh.outside)
        self.outside = sh.outside
        self.limit = limit
        self.total = total
        if self.exact_levels:
            self.near = np.zeros(len(levels), dtype=bool)
        else:
            gap = np.diff(logw) <= NEAR_TIE * np.maximum(1.0, np.abs(logw[1:]))
            near = np.zeros(len(levels), dtype=bool)
            near[1:] |= gap
            near[:-1] |= gap
            self.near = near
        log.debug("rearrangement table: limit=%s shells=%d total=%d", limit, len(levels), total)

    def _grow(self):
        self._build(self.limit * (2.0 if self.mixed else 2.0 ** (1.0 if math.isinf(self.p) else self.p)) + 1)

    def _index(self, n: int) -> int:
        while True:
            if n <= self.total:
                i = int(np.searchsorted(self.cum, n, side="left"))
                if self.logw[i] <= self.log_out:
                    return i
            self._grow()

    def ensure(self, n: int):
        self._index(n)

    # queries -------------------------------------------------------------------
    def shell_value(self, i: int) -> float:
        return 1.0 / self.value_of(self.levels[i])

    def sigma(self, n: int) -> float:
        if n < 1:
            raise PreconditionError("rank n must be >= 1")
        return self.shell_value(self._index(n))

    def neg_log_sigma(self, n: int) -> float:
        i = self._index(n)  # may rebuild the table, so index afterwards
        return float(self.logw[i])

    def result(self, n: int) -> ApproxNumberResult:
        i = self._index(n)
        value = self.shell_value(i)
        if not self.near[i]:
            return ApproxNumberResult(n, value, "L2", True, neg_log=float(self.logw[i]))
        lo = hi = i
        while lo > 0 and self.near[lo - 1] and self.near[lo]:
            lo -= 1
        while hi + 1 < len(self.levels) and self.near[hi + 1] and self.near[hi]:
            hi += 1
        vals = [self.shell_value(j) for j in range(lo, hi + 1)]
        return ApproxNumberResult(n, value, "L2", False, min(vals), max(vals), float(self.logw[i]))

    def sigma_many(self, ns) -> np.ndarray:
        """Vectorised ``sigma`` for an array of ranks."""
        ns = np.asarray(ns, dtype=np.int64)
        if ns.size == 0:
            return np.zeros(0)
        self._index(int(ns.max()))
        idx = np.searchsorted(self.cum, ns, side="left")
        uniq, inv = np.unique(idx, return_inverse=True)
        vals = np.array([self.shell_value(int(i)) for i in uniq])
        return vals[inv.reshape(-1)]

    def first_values(self, m: int) -> np.ndarray:
        """``sigma_1, ..., sigma_m`` materialised (tests and small tables only)."""
        return self.sigma_many(np.arange(1, m + 1))

    def count_below_weight(self, threshold: float) -> int:
        """``#{k : w(k) < threshold}``, excluding ties within relative 1e-12."""
        if threshold <= 0:
            return 0
        cut = math.log(threshold) + math.log1p(-NEAR_TIE)
        while self.log_out < cut:
            self._grow()
        i = int(np.searchsorted(self.logw, cut, side="left"))
        return int(self.cum[i - 1]) if i > 0 else 0


_VIEWS: dict = {}


def view_for(spec: WeightSpec, ceiling: int = DEFAULT_CEILING) -> RearrangementView:
    key = (spec, id(spec.phi), ceiling, spec.numerator and id(spec.numerator.phi))
    v = _VIEWS.get(key)
    if v is None:
        if len(_VIEWS) > 32:
            _VIEWS.clear()
        v = _VIEWS[key] = RearrangementView(spec, ceiling)
    return v


def approx_number(spec: WeightSpec, n: int, ceiling: int = DEFAULT_CEILING) -> ApproxNumberResult:
    """Exact a_n(Id: H^w -> L_2) = sigma_n."""
    if n < 1:
        raise PreconditionError("rank n must be >= 1")
    return view_for(spec, ceiling).result(int(n))


def full_enumeration_sigmas(spec: WeightSpec, radius: int) -> tuple[np.ndarray, int]:
    """Brute-force oracle: sort 1/w over the box [-radius, radius]^d.

    Returns the sorted values and the number of leading entries that are
    guaranteed to agree with the true rearrangement.
    """
    d = spec.d
    axis = np.arange(-radius, radius + 1)
    K = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    sig = np.sort(1.0 / evaluate_many(spec, K))[::-1]
    edge = np.zeros((1, d), dtype=np.int64)
    edge[0, 0] = radius + 1
    sig_out = 1.0 / evaluate_many(spec, edge)[0]
    return sig, int(np.sum(sig >= sig_out))


# L_inf target ---------------------------------------------------------------------

def _log_count_upper(t: float, p: float, d: int) -> float:
    if math.isinf(p):
        return d * math.log(2 * math.floor(t) + 1)
    _, outer = adjusted_radii(t, p, d)
    return log_volume_pball(p, d) + d * math.log(outer)


def _log_count_lower(t: float, p: float, d: int) -> float:
    if math.isinf(p):
        return d * math.log(2 * math.floor(t) + 1)
    inner, _ = adjusted_radii(t, p, d)
    if inner is None:
        return -math.inf
    return log_volume_pball(p, d) + d * math.log(inner)


def _radial_tail(view: RearrangementView, theta: float = 1.01, tol: float = 1e-9):
    """Bounds on sum of sigma^2 over frequencies outside the shell table.

    Stieltjes summation against the ball count N(t): the tail equals
    -h(t0) N(t0) + int_{t0}^inf N(t) (-h'(t)) dt with h = 1/phi^2, and on a
    geometric grid N is sandwiched by volume bounds of adjusted radii.
    """
    p, d = view.p, view.d
    # every frequency with ||k||_p <= t0 is in the table, none beyond it
    if math.isinf(p):
        t0 = view.outside - 1.0
    elif is_integer_p(p):
        t0 = (view.outside - 1.0) ** (1.0 / p)
    else:
        t0 = view.limit ** (1.0 / p)
    count0 = view.total
    logg = view.log_of

    def log_h(t):
        return -2.0 * logg(t if math.isinf(p) else t**p)

    hi_terms, lo_terms = [], []
    decade, decade_start, decades = 0.0, t0, []
    t_prev, lh_prev = t0, log_h(t0)
    for step in range(1, 200000):
        t = t0 * theta**step
        lh = log_h(t)
        if lh >= lh_prev:
            raise NonMonotoneProfileError("weight profile decreases beyond the table")
        log_dh = lh_prev + math.log1p(-math.exp(lh - lh_prev))
        term_hi = math.exp(_log_count_upper(t, p, d) + log_dh)
        term_lo = math.exp(_log_count_lower(t_prev, p, d) + log_dh)
        hi_terms.append(term_hi)
        lo_terms.append(term_lo)
        decade += term_hi
        if t >= 10 * decade_start:
            decades.append(decade)
            decade, decade_start = 0.0, t
            if len(decades) >= 4 and all(decades[-k] >= 0.95 * decades[-k - 1] for k in (1, 2, 3)):
                raise DivergentTailError("tail sums fail the ratio test over three decades")
        if len(hi_terms) > 60 and t > 100.0:
            rho = max(hi_terms[-k] / hi_terms[-k - 1] for k in range(1, 50))
            if rho < 1:
                rest = hi_terms[-1] * rho / (1 - rho)
                acc = math.fsum(hi_terms)
                if rest <= tol * acc or acc == 0:
                    h0 = math.exp(log_h(t0))
                    upper = max(0.0, acc + rest - h0 * count0)
                    lower = max(0.0, math.fsum(lo_terms) - h0 * count0)
                    return lower, upper
        t_prev, lh_prev = t, lh
    raise DivergentTailError("tail did not settle within the step budget")


def _head_sum(view: RearrangementView, n: int) -> float:
    """sum_{j >= n} sigma_j^2 over the shell table only."""
    i = view._index(n)
    first = float(int(view.cum[i]) - (n - 1))
    parts = [first * view.shell_value(i) ** 2]
    parts.extend(float(m) * view.shell_value(j) ** 2 for j, m in enumerate(view.mults) if j > i)
    return math.fsum(parts)


def _mixed_linf(spec: WeightSpec, n: int, rel_tol: float, ceiling: int) -> ApproxNumberResult:
    s, p, d = spec.s, spec.p, spec.d
    e = 2 * s / p
    if 2 * s <= 1:
        raise DivergentTailError("sum of squared inverse mixed weights diverges for s <= 1/2")
    f = lambda x: (1.0 + x**p) ** (-e)  # noqa: E731
    view = view_for(spec, ceiling)
    head_vals = view.first_values(n - 1) if n > 1 else np.zeros(0)
    head = math.fsum((head_vals**2).tolist())
    K = 1000
    for _ in range(12):
        part = 1.0 + 2.0 * math.fsum(f(float(k)) for k in range(1, K + 1))
        up = integrate.quad(f, K, math.inf, epsabs=0, epsrel=1e-13, limit=200)[0]
        lo = integrate.quad(f, K + 1, math.inf, epsabs=0, epsrel=1e-13, limit=200)[0]
        lo_tot, hi_tot = (part + 2 * lo) ** d - head, (part + 2 * up) ** d - head
        if lo_tot > 0 and math.sqrt(hi_tot / lo_tot) - 1 <= rel_tol:
            a_lo, a_hi = math.sqrt(lo_tot), math.sqrt(hi_tot)
            return ApproxNumberResult(n, math.sqrt(a_lo * a_hi), "Linf", False, a_lo, a_hi)
        K *= 4
    raise DivergentTailError("could not resolve the mixed L_inf tail to the requested tolerance")


def approx_number_linf(spec: WeightSpec, n: int, rel_tol: float = 1e-6, ceiling: int = DEFAULT_CEILING):
    """Interval for (sum_{j >= n} sigma_j^2)^(1/2)."""
    if n < 1:
        raise PreconditionError("rank n must be >= 1")
    if spec.kind == "Mixed":
        return _mixed_linf(spec, n, rel_tol, ceiling)
    view = RearrangementView(spec, ceiling)
    view.ensure(n)
    for _ in range(40):
        head = _head_sum(view, n)
        t_lo, t_hi = _radial_tail(view)
        lo, hi = head + t_lo, head + t_hi
        if hi <= lo * (1 + rel_tol) ** 2:
            a_lo, a_hi = math.sqrt(lo), math.sqrt(hi)
            return ApproxNumberResult(n, math.sqrt(a_lo * a_hi), "Linf", False, a_lo, a_hi)
        view._grow()
    raise DivergentTailError("tail converges too slowly for the requested tolerance")


# characterisation sandwiches ------------------------------------------------------

def _monotone_phi(spec: WeightSpec):
    if spec.kind == "Mixed":
        raise NotRadialError("characterisation needs a radial weight")
    phi = phi_of(spec)
    if not phi.monotone or phi.monotone_from > 0:
        raise NonMonotoneProfileError(f"profile {phi.descriptor} is not monotone on [0, inf)")
    return phi


def characterization_bounds(spec: WeightSpec, n: int) -> BoundPair:
    """[1/phi(2/eps_lo), 1/phi(1/(4 eps_hi))] from a certified entropy interval."""
    if n < 2:
        raise PreconditionError("the characterisation holds for n >= 2")
    phi = _monotone_phi(spec)
    est = entropy_bounds(int(n), spec.d, spec.norm_p)
    with np.errstate(over="ignore"):
        lower = 1.0 / float(phi(2.0 / est.lower))
        upper = 1.0 / float(phi(1.0 / (4.0 * est.upper)))
    return BoundPair(
        lower,
        upper,
        "generalized-characterization",
        {"entropy_lower": est.provenance["lower"], "entropy_upper": est.provenance["upper"]},
    )


def base_sandwich(n: int, d: int) -> tuple[float, float, float]:
    """(eps_n/2, a_n, 4 eps_n) for w = max(1, ||k||_inf) with exact eps_n."""
    eps = entropy_exact_linf(n, d)
    from .weights import isotropic

    a = approx_number(isotropic(1.0, math.inf, d), n).value
    return 0.5 * eps, a, 4.0 * eps


# regimes -------------------------------------------------------------------------

def regime_of(n: int, d: int) -> str:
    if n <= d:
        return "pre-d"
    if d < 64 and n <= 2**d:
        return "preasymptotic"
    if d >= 64 and math.log2(n) <= d:
        return "preasymptotic"
    return "asymptotic"


def log_ratio_shape(n: int, d: int) -> float:
    """log n / log(1 + d / log n), logarithms base 2; 1 at n = 1."""
    if n < 2:
        return 1.0
    ln = math.log2(n)
    return ln / math.log2(1.0 + d / ln)


def regime_bounds_iso(
    s: float, p: float, d: int, n: int, constants: BoundConstants = DEFAULT_CONSTANTS
) -> tuple[str, BoundPair]:
    regime = regime_of(n, d)
    if math.isinf(p):
        if regime != "asymptotic":
            return regime, BoundPair(1.0, 1.0, "pinf-exact", {}, True)
        c = constants.get("iso_regime_pinf", s=s)
        scale = n ** (-s / d)
        return regime, BoundPair(c.c_low * scale, c.c_high * scale, "pinf-theorem", c.to_json(), True)
    c = constants.get("iso_regime", s=s, p=p)
    if regime == "pre-d":
        shape = 1.0
    elif regime == "preasymptotic":
        shape = log_ratio_shape(n, d) ** (-s / p)
    else:
        shape = d ** (-s / p) * n ** (-s / d)
    return regime, BoundPair(c.c_low * shape, c.c_high * shape, f"iso-{regime}-reference", c.to_json(), False)


# limits --------------------------------------------------------------------------

@dataclass
class LimitReport:
    spec: WeightSpec
    rows: list  # (n, normalised, target)
    verdict: str
    strict: bool

    def final_ratio(self) -> float:
        n, val, target = self.rows[-1]
        return val / target


def _normalised(spec: WeightSpec, n: int, view: RearrangementView) -> tuple[float, float]:
    d = spec.d
    if spec.kind == "Isotropic":
        vol = volume_pball(spec.p, d)
        return math.exp(spec.s / d * math.log(n)) * view.sigma(n), vol ** (spec.s / d)
    if spec.kind == "Gevrey":
        lam = math.exp(-spec.alpha / d * log_volume_pball(spec.p, d))
        expo = spec.beta * lam * math.exp(spec.alpha / d * math.log(n))
        return math.exp(expo - view.neg_log_sigma(n)), 1.0
    if spec.kind == "Ratio" and spec.numerator.kind == "Gevrey" and spec.denominator.kind == "Isotropic":
        g, iso = spec.numerator, spec.denominator
        lv = log_volume_pball(g.p, d)
        expo = g.beta * math.exp(-g.alpha / d * lv + g.alpha / d * math.log(n))
        val = math.exp(expo - view.neg_log_sigma(n) + iso.s / d * lv - iso.s / d * math.log(n))
        return val, 1.0
    raise PreconditionError(f"no limit normalisation for {spec.kind}")


def _strict_ok(spec: WeightSpec) -> bool:
    if spec.kind == "Isotropic":
        return True
    if spec.kind == "Gevrey":
        return spec.alpha < min(1.0, spec.p)
    if spec.kind == "Ratio":
        return spec.numerator.alpha < min(1.0, spec.numerator.p)
    return False


def limit_diagnostic(spec: WeightSpec, n_grid: Sequence[int], ceiling: int = DEFAULT_CEILING) -> LimitReport:
    """Normalised a_n against its limit along ``n_grid``."""
    if not n_grid:
        raise PreconditionError("n_grid must be nonempty")
    view = view_for(spec, ceiling)
    view.ensure(int(max(n_grid)))
    rows = []
    for n in n_grid:
        val, target = _normalised(spec, int(n), view)
        rows.append((int(n), val, target))
    errs = [abs(v / t - 1) for _, v, t in rows]
    if len(errs) >= 3 and errs[-1] <= errs[-2] <= errs[-3]:
        verdict = "converging"
    elif errs[-1] <= 0.05:
        verdict = "near-limit"
    else:
        verdict = "inconclusive"
    return LimitReport(spec, rows, verdict, _strict_ok(spec))
