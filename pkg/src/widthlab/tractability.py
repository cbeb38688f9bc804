"""Information complexity n(eps, d), tractability verdicts, and the
complexity-transfer identity for composed weights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .approx import BoundPair, RearrangementView, view_for
from .constants import DEFAULT_CONSTANTS, BoundConstants
from .errors import NotRadialError, PreconditionError
from .lattice import DEFAULT_CEILING
from .weights import NAMED_PHI, PhiFunction, WeightSpec, custom_radial, format_p, phi_of

CLASSES = (
    "curse",
    "intractable-not-curse",
    "weakly-tractable",
    "not-quasi-polynomially-tractable",
    "quasi-polynomially-tractable",
)


@dataclass(frozen=True)
class InfoComplexityResult:
    eps: float
    d: int
    spec: WeightSpec
    value: Optional[int]
    method: str = "exact-count"
    bounds: Optional[BoundPair] = None

    def to_json(self) -> dict:
        out = {"eps": self.eps, "d": self.d, "spec": self.spec.to_json(), "method": self.method}
        if self.value is not None:
            out["n"] = str(self.value)
        if self.bounds is not None:
            out["bounds"] = self.bounds.to_json()
        return out


@dataclass(frozen=True)
class TractabilityVerdict:
    problem: str
    cls: str
    witness: str
    params: dict
    flags: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"problem": self.problem, "class": self.cls, "witness": self.witness, "params": self.params, "flags": self.flags}


def info_complexity_exact(
    spec: WeightSpec, eps: float, d: Optional[int] = None, ceiling: int = DEFAULT_CEILING
) -> InfoComplexityResult:
    """n(eps, d) = #{k : w(k) < 1/eps} + 1 (weights equal to 1/eps are not counted)."""
    if not 0 < eps <= 1:
        raise PreconditionError("eps must lie in (0, 1]")
    if d is not None and d != spec.d:
        spec = spec.with_d(d)
    count = view_for(spec, ceiling).count_below_weight(1.0 / eps)
    return InfoComplexityResult(eps, spec.d, spec, count + 1)


# lemma-based reference bounds --------------------------------------------------

@dataclass(frozen=True)
class IcomplReport:
    eps: float
    d: int
    upper_branch: int
    log_n_upper: float
    log_n_lower: Optional[float]
    thresholds: dict
    certified: bool = False

    def to_json(self) -> dict:
        return {
            "eps": self.eps,
            "d": self.d,
            "upper_branch": self.upper_branch,
            "log2_n_upper_reference": self.log_n_upper,
            "log2_n_lower_reference": self.log_n_lower,
            "thresholds": dict(self.thresholds),
            "certified": self.certified,
        }


def info_complexity_bounds_iso(
    s: float, p: float, eps: float, d: int, constants: BoundConstants = DEFAULT_CONSTANTS, gamma: float = 0.0
) -> IcomplReport:
    """Branch-wise reference values of log2 n(eps, d); never certified."""
    if math.isinf(p):
        raise PreconditionError("the lemma covers finite p only")
    if not 0 < eps < 1:
        raise PreconditionError("eps must lie in (0, 1)")
    reg = constants.get("iso_regime", s=s, p=p)
    lem = constants.get("icompl_iso", s=s, p=p)
    C, c = reg.c_high, reg.c_low
    ld = math.log2(d) if d > 1 else 0.0
    shape = (math.log2(1 + d / ld) / ld) ** (s / p) if d > 1 else 1.0
    e1u = C * shape
    e2u = C * d ** (-s / p)
    e3u = 0.0 if gamma == 0 else C * 2.0**-s * d ** (-s * (1 / p + 1 / gamma))
    e1l = c * shape
    e2l = c * 2.0**-s * d ** (-s / p)
    inv = 1.0 / eps
    if eps >= e1u:
        branch, val = 1, ld
    elif eps >= e2u:
        branch, val = 2, ld * inv ** (p / s)
    elif eps >= e3u:
        branch, val = 3, math.log2(inv) * inv ** (p / s)
    else:
        branch, val = 4, math.log2(inv) * inv ** (p * gamma / (s * (p + gamma)))
    lower = lem.c_low * inv ** (p / s) if e2l <= eps <= e1l else None
    th = {"eps1_U": e1u, "eps2_U": e2u, "eps3_U": e3u, "eps1_L": e1l, "eps2_L": e2l}
    return IcomplReport(eps, d, branch, lem.c_high * val, lower, th, False)


# classifiers -------------------------------------------------------------------

def classify_iso(s: float, p: float) -> TractabilityVerdict:
    if not s > 0 or not p > 0:
        raise PreconditionError("s and p must be positive")
    params = {"s": s, "p": format_p(p)}
    if math.isinf(p):
        return TractabilityVerdict("iso", "curse", "tractability-iso(i)", params, {"curse": True, "weak": False})
    flags = {"curse": False, "weak": s > p, "alpha_beta_weak_for_alpha_above": p / s}
    if s <= p:
        return TractabilityVerdict("iso", "intractable-not-curse", "tractability-iso(iii)", params, flags)
    return TractabilityVerdict("iso", "weakly-tractable", "tractability-iso(iv)", params, flags)


def alpha_beta_weak_iso(s: float, p: float, a: float, b: float) -> bool:
    """(a, b)-weak tractability of the isotropic problem: a > p/s, any b > 0."""
    return math.isfinite(p) and b > 0 and a > p / s


def classify_gevrey(alpha: float, beta: float, p: float) -> TractabilityVerdict:
    if not (alpha > 0 and beta > 0 and p > 0):
        raise PreconditionError("alpha, beta and p must be positive")
    params = {"alpha": alpha, "beta": beta, "p": format_p(p)}
    qp = math.isfinite(p) and alpha >= p
    flags = {"quasi_polynomial": qp, "modified_weak": math.isfinite(p) and alpha > p}
    if qp:
        return TractabilityVerdict("gevrey", "quasi-polynomially-tractable", "tractability-gevrey", params, flags)
    if math.isinf(p):
        # transfer to max(1, ||k||_inf)^alpha, which has the curse for every eps' < 1
        flags["curse"] = True
        return TractabilityVerdict("gevrey", "curse", "transfer+tractability-iso(i)", params, flags)
    return TractabilityVerdict("gevrey", "not-quasi-polynomially-tractable", "tractability-gevrey", params, flags)


# transfer identity -----------------------------------------------------------------

def composed_spec(base: WeightSpec, phi: PhiFunction) -> WeightSpec:
    """Radial weight phi(w(k)) for k != 0 and 1 at the origin."""
    if not base.is_radial:
        raise NotRadialError("transfer identity needs a radial base weight")
    inner = phi_of(base)

    def func(t):
        t = float(t)
        return 1.0 if t == 0 else float(phi(float(inner(t))))

    prof = PhiFunction(func, None, f"{phi.descriptor}∘{inner.descriptor}", True, 1.0)
    return custom_radial(prof, base.norm_p, base.d)


@dataclass(frozen=True)
class TransferRow:
    eps: float
    lhs: int
    rhs: int
    equal: bool
    eps_base: float


def transfer_identity_check(
    base: WeightSpec, phi: PhiFunction, eps_grid: Sequence[float], d: Optional[int] = None
) -> list[TransferRow]:
    """Both sides of n^{phi(w)}(eps) = n^w(1/phi^{-1}(1/eps)) by exact counting.

    Where 1/phi^{-1}(1/eps) >= 1 the right side is 1 while the composed weight
    still needs rank 2 (its value 1 at the origin exceeds eps); the identity
    is then checked as lhs == max(rhs, 2).
    """
    if d is not None and d != base.d:
        base = base.with_d(d)
    comp = RearrangementView(composed_spec(base, phi))
    bview = view_for(base)
    rows = []
    for eps in eps_grid:
        if not 0 < eps < 1:
            raise PreconditionError("eps must lie in (0, 1)")
        lhs = comp.count_below_weight(1.0 / eps) + 1
        thr = float(phi.inv(1.0 / eps))
        rhs = bview.count_below_weight(thr) + 1
        expect = rhs if thr > 1 else max(rhs, 2)
        rows.append(TransferRow(eps, lhs, rhs, lhs == expect, 1.0 / thr))
    return rows


def named_phi(name: str) -> PhiFunction:
    if name not in NAMED_PHI:
        raise PreconditionError(f"unknown profile {name!r}")
    return NAMED_PHI[name]
