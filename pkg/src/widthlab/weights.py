"""Weight families on Z^d and their radial profiles.

Every radial weight is evaluated through its *level*: the quantity
``u = sum_j |k_j|^p`` for finite ``p`` and ``u = max_j |k_j|`` for ``p = inf``.
The lattice and rearrangement code enumerates the same level values, so a
weight computed from a frequency vector and a weight computed from a shell of
the ball agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DimensionMismatchError, NonMonotoneProfileError, NotRadialError, PreconditionError

INF = math.inf

KINDS = ("Isotropic", "Gevrey", "Mixed", "Ratio", "CustomRadial")


def is_integer_p(p: float) -> bool:
    return math.isfinite(p) and float(p).is_integer()


def parse_p(value) -> float:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        if "/" in value:
            num, den = value.split("/")
            return float(num) / float(den)
        return float(value)
    return float(value)


def format_p(p: float):
    if math.isinf(p):
        return "inf"
    return int(p) if is_integer_p(p) else p


@dataclass(frozen=True)
class PhiFunction:
    """A univariate profile ``phi`` with an inverse.

    ``monotone_from`` is the left end of the range on which ``func`` is known to
    be nondecreasing; profiles derived from quotients are only monotone for
    ``t >= 1``, which is all the lattice ever sees away from the origin.
    """

    func: Callable
    inverse: Optional[Callable]
    descriptor: str
    monotone: bool = True
    monotone_from: float = 0.0

    def __call__(self, t):
        return self.func(t)

    def inv(self, y):
        if self.inverse is None:
            raise PreconditionError(f"profile {self.descriptor} has no inverse")
        return self.inverse(y)


def _pos(y):
    return np.maximum(y, 0.0)


def _numeric_inverse(func: Callable, t_lo: float = 1.0) -> Callable:
    """Inverse of an increasing function on ``[t_lo, inf)`` by bracketing + Brent."""

    def inverse(y):
        y = float(y)
        if y <= float(func(t_lo)):
            return t_lo
        hi = max(2.0 * t_lo, 2.0)
        while float(func(hi)) < y:
            hi *= 2.0
            if hi > 1e300:
                raise PreconditionError("profile inverse does not exist in range")
        return brentq(lambda t: float(func(t)) - y, t_lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)

    return inverse


NAMED_PHI = {
    "max1": PhiFunction(lambda t: np.maximum(1.0, t), lambda y: np.maximum(1.0, y), "max(1,t)"),
    "exp": PhiFunction(np.exp, lambda y: np.log(y), "exp(t)"),
    "one_plus": PhiFunction(lambda t: 1.0 + t, lambda y: _pos(y - 1.0), "1+t"),
    "identity": PhiFunction(lambda t: t, lambda y: y, "t"),
    "square": PhiFunction(lambda t: t * t, lambda y: np.sqrt(y), "t^2"),
}


@dataclass(frozen=True)
class WeightSpec:
    kind: str
    d: int
    s: Optional[float] = None
    p: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    numerator: Optional["WeightSpec"] = None
    denominator: Optional["WeightSpec"] = None
    phi: Optional[PhiFunction] = field(default=None, compare=False)
    phi_name: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown weight kind {self.kind!r}")
        if not isinstance(self.d, (int, np.integer)) or self.d < 1:
            raise PreconditionError(f"dimension must be a positive integer, got {self.d!r}")
        if self.kind == "Ratio":
            if self.numerator is None or self.denominator is None:
                raise PreconditionError("Ratio needs numerator and denominator")
            if self.numerator.d != self.d or self.denominator.d != self.d:
                raise DimensionMismatchError("Ratio parts must share the dimension")
            return
        if self.p is None or not self.p > 0:
            raise PreconditionError(f"p must be positive, got {self.p!r}")
        if self.kind in ("Isotropic", "Mixed") and not (self.s is not None and self.s > 0):
            raise PreconditionError("smoothness s must be positive")
        if self.kind == "Mixed" and math.isinf(self.p):
            raise PreconditionError("Mixed weights need finite p")
        if self.kind == "Gevrey" and not (
            self.alpha is not None and self.alpha > 0 and self.beta is not None and self.beta > 0
        ):
            raise PreconditionError("Gevrey weights need alpha > 0 and beta > 0")
        if self.kind == "CustomRadial":
            if self.phi is None:
                raise PreconditionError("CustomRadial needs a profile")
            if abs(float(self.phi(0.0)) - 1.0) > 1e-12:
                raise PreconditionError("CustomRadial profile must satisfy phi(0) = 1")

    @property
    def is_radial(self) -> bool:
        if self.kind == "Ratio":
            return (
                self.numerator.is_radial
                and self.denominator.is_radial
                and self.numerator.norm_p == self.denominator.norm_p
            )
        return self.kind != "Mixed"

    @property
    def norm_p(self) -> float:
        if self.kind == "Ratio":
            return self.numerator.norm_p
        return self.p

    def with_d(self, d: int) -> "WeightSpec":
        if self.kind == "Ratio":
            return WeightSpec("Ratio", d, numerator=self.numerator.with_d(d), denominator=self.denominator.with_d(d))
        from dataclasses import replace

        return replace(self, d=d)

    # JSON ------------------------------------------------------------------
    def to_json(self) -> dict:
        out = {"kind": self.kind, "d": int(self.d)}
        if self.kind == "Ratio":
            out["numerator"] = self.numerator.to_json()
            out["denominator"] = self.denominator.to_json()
            return out
        out["p"] = format_p(self.p)
        for key in ("s", "alpha", "beta"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.kind == "CustomRadial":
            if self.phi_name is None:
                raise PreconditionError("only named CustomRadial profiles serialize")
            out["phi"] = self.phi_name
        return out

    @classmethod
    def from_json(cls, obj: dict, d: Optional[int] = None) -> "WeightSpec":
        kind = obj.get("kind")
        dim = int(obj["d"]) if "d" in obj else d
        if dim is None:
            raise PreconditionError("spec JSON needs 'd'")
        if kind == "Ratio":
            num = cls.from_json(obj["numerator"], dim)
            den = cls.from_json(obj["denominator"], dim)
            return cls("Ratio", dim, numerator=num, denominator=den)
        if "p" not in obj:
            raise PreconditionError("spec JSON needs 'p'")
        p = parse_p(obj["p"])
        num = lambda key: None if obj.get(key) is None else float(obj[key])  # noqa: E731
        if kind == "CustomRadial":
            name = obj.get("phi")
            if name not in NAMED_PHI:
                raise PreconditionError(f"unknown profile name {name!r}; known: {sorted(NAMED_PHI)}")
            return cls(kind, dim, p=p, phi=NAMED_PHI[name], phi_name=name)
        return cls(kind, dim, s=num("s"), p=p, alpha=num("alpha"), beta=num("beta"))


def isotropic(s: float, p: float, d: int) -> WeightSpec:
    return WeightSpec("Isotropic", d, s=float(s), p=float(p))


def gevrey(alpha: float, beta: float, p: float, d: int) -> WeightSpec:
    return WeightSpec("Gevrey", d, alpha=float(alpha), beta=float(beta), p=float(p))


def mixed(s: float, p: float, d: int) -> WeightSpec:
    return WeightSpec("Mixed", d, s=float(s), p=float(p))


def ratio(numerator: WeightSpec, denominator: WeightSpec) -> WeightSpec:
    return WeightSpec("Ratio", numerator.d, numerator=numerator, denominator=denominator)


def custom_radial(phi, p: float, d: int) -> WeightSpec:
    if isinstance(phi, str):
        return WeightSpec("CustomRadial", d, p=float(p), phi=NAMED_PHI[phi], phi_name=phi)
    return WeightSpec("CustomRadial", d, p=float(p), phi=phi)


# levels ----------------------------------------------------------------------

def norm_power(k: Sequence[int], p: float):
    """``sum |k_j|^p`` (exact int for integer p), or ``max |k_j|`` for p = inf."""
    if math.isinf(p):
        return max((abs(int(x)) for x in k), default=0)
    if is_integer_p(p):
        ip = int(p)
        return sum(abs(int(x)) ** ip for x in k)
    return _canonical_sum(sorted(float(abs(int(x))) ** p for x in k))


def _canonical_sum(vals) -> float:
    # smallest-first left-to-right accumulation; lattice shells use the same order
    acc = 0.0
    for v in vals:
        acc = acc + v
    return acc


def norm_power_many(K: np.ndarray, p: float) -> np.ndarray:
    K = np.abs(np.asarray(K, dtype=np.int64))
    if math.isinf(p):
        return K.max(axis=1) if K.shape[1] else np.zeros(len(K), dtype=np.int64)
    if is_integer_p(p):
        return (K ** int(p)).sum(axis=1)
    table = {}
    out = np.empty(len(K))
    for i, row in enumerate(K):
        out[i] = _canonical_sum(sorted(table.setdefault(x, float(x) ** p) for x in row.tolist()))
    return out


def _exp(x: float) -> float:
    return math.exp(x) if x < 709.0 else INF


def level_profile(spec: WeightSpec) -> Callable:
    """The weight as a scalar function of the level ``u`` (Python floats, libm only)."""
    kind, p = spec.kind, spec.norm_p
    if kind == "Isotropic":
        s = spec.s
        if math.isinf(p):
            return lambda u: max(1.0, float(u)) ** s
        return lambda u: (1.0 + u) ** (s / p)
    if kind == "Gevrey":
        a, b = spec.alpha, spec.beta
        expo = a if math.isinf(p) else a / p
        return lambda u: _exp(b * float(u) ** expo)
    if kind == "CustomRadial":
        phi = spec.phi
        if math.isinf(p):
            return lambda u: float(phi(float(u)))
        return lambda u: float(phi(float(u) ** (1.0 / p)))
    if kind == "Ratio":
        if not spec.is_radial:
            raise NotRadialError("Ratio of non-radial or mismatched-p weights has no level profile")
        top, bot = level_profile(spec.numerator), level_profile(spec.denominator)
        return lambda u: top(u) / bot(u)
    raise NotRadialError("Mixed weights are not radial; use the hyperbolic-cross machinery")


def log_level_profile(spec: WeightSpec) -> Callable:
    """``log w`` as a function of the level; finite where the weight overflows."""
    kind, p = spec.kind, spec.norm_p
    if kind == "Isotropic":
        s = spec.s
        if math.isinf(p):
            return lambda u: s * math.log(max(1.0, float(u)))
        return lambda u: (s / p) * math.log1p(float(u))
    if kind == "Gevrey":
        a, b = spec.alpha, spec.beta
        expo = a if math.isinf(p) else a / p
        return lambda u: b * float(u) ** expo
    if kind == "Ratio":
        if not spec.is_radial:
            raise NotRadialError("Ratio of non-radial or mismatched-p weights has no level profile")
        top, bot = log_level_profile(spec.numerator), log_level_profile(spec.denominator)
        return lambda u: top(u) - bot(u)
    if kind == "Mixed":
        s, p = spec.s, spec.p
        return lambda v: (s / p) * math.log(float(v))
    g = level_profile(spec)
    return lambda u: math.log(g(u))


def mixed_profile(spec: WeightSpec) -> Callable:
    """Mixed weight as a function of the product level ``prod (1 + |k_j|^p)``."""
    e = spec.s / spec.p
    return lambda v: float(v) ** e


def mixed_level(k: Sequence[int], p: float):
    """``prod_j (1 + |k_j|^p)``, exact for integer p."""
    if is_integer_p(p):
        ip = int(p)
        return math.prod(1 + abs(int(x)) ** ip for x in k)
    return math.prod(1.0 + float(abs(int(x))) ** p for x in k)


def evaluate(spec: WeightSpec, k: Sequence[int]) -> float:
    if len(k) != spec.d:
        raise DimensionMismatchError(f"frequency has length {len(k)}, spec has d={spec.d}")
    if spec.kind == "Mixed":
        return mixed_profile(spec)(mixed_level(k, spec.p))
    if spec.kind == "Ratio" and not spec.is_radial:
        den = evaluate(spec.denominator, k)
        if den == 0:
            raise PreconditionError("Ratio denominator vanished")
        return evaluate(spec.numerator, k) / den
    return level_profile(spec)(_scalar(norm_power(k, spec.norm_p)))


def _scalar(u):
    return u.item() if isinstance(u, np.generic) else u


def evaluate_many(spec: WeightSpec, K: np.ndarray) -> np.ndarray:
    """Row-wise ``evaluate``; the profile is applied once per distinct level."""
    K = np.asarray(K)
    if K.ndim != 2 or K.shape[1] != spec.d:
        raise DimensionMismatchError(f"expected shape (m, {spec.d}), got {K.shape}")
    if spec.kind == "Ratio" and not spec.is_radial:
        return evaluate_many(spec.numerator, K) / evaluate_many(spec.denominator, K)
    if spec.kind == "Mixed":
        levels = [mixed_level(row, spec.p) for row in K.tolist()]
        g = mixed_profile(spec)
        cache = {}
        return np.array([cache[v] if v in cache else cache.setdefault(v, g(v)) for v in levels])
    u = norm_power_many(K, spec.norm_p)
    uniq, inv = np.unique(u, return_inverse=True)
    g = level_profile(spec)
    vals = np.array([g(x) for x in uniq.tolist()], dtype=float)
    return vals[inv.reshape(-1)]


# profiles --------------------------------------------------------------------

def check_monotone_domain(phi: Callable, t_min: float, t_max: float, samples: int) -> bool:
    """True iff ``phi`` is nondecreasing on an equispaced grid of ``samples`` points."""
    if not t_min < t_max or samples < 2:
        raise PreconditionError("need t_min < t_max and at least two samples")
    grid = np.linspace(t_min, t_max, int(samples))
    vals = np.array([float(phi(t)) for t in grid])
    return bool(np.all(np.diff(vals) >= 0))


def phi_of(spec: WeightSpec) -> PhiFunction:
    kind, p = spec.kind, spec.norm_p
    if kind == "Mixed":
        raise NotRadialError("Mixed weights are not radial; use the hyperbolic-cross machinery")
    if kind == "CustomRadial":
        return spec.phi
    if kind == "Isotropic":
        s = spec.s
        if math.isinf(p):
            return PhiFunction(
                lambda t: np.maximum(1.0, t) ** s,
                lambda y: np.maximum(1.0, y) ** (1.0 / s),
                f"max(1,t)^{s:g}",
            )
        return PhiFunction(
            lambda t: (1.0 + np.asarray(t, dtype=float) ** p) ** (s / p),
            lambda y: _pos(np.asarray(y, dtype=float) ** (p / s) - 1.0) ** (1.0 / p),
            f"(1+t^{p:g})^({s:g}/{p:g})",
        )
    if kind == "Gevrey":
        a, b = spec.alpha, spec.beta
        return PhiFunction(
            lambda t: np.exp(b * np.asarray(t, dtype=float) ** a),
            lambda y: (_pos(np.log(y)) / b) ** (1.0 / a),
            f"exp({b:g} t^{a:g})",
        )
    # Ratio
    if not spec.is_radial:
        raise NotRadialError("Ratio parts must both be radial with the same p")
    top, bot = phi_of(spec.numerator), phi_of(spec.denominator)
    func = lambda t: top(t) / bot(t)  # noqa: E731
    num, den = spec.numerator, spec.denominator
    if num.kind == "Gevrey" and den.kind == "Isotropic":
        if den.s > num.beta * num.alpha:
            raise NonMonotoneProfileError(
                f"quotient profile is not monotone: s={den.s:g} > beta*alpha={num.beta * num.alpha:g}"
            )
    elif not check_monotone_domain(func, 1.0, 200.0, 2000):
        raise NonMonotoneProfileError(f"quotient profile {top.descriptor}/{bot.descriptor} is not monotone on [1, 200]")
    return PhiFunction(func, _numeric_inverse(func, 1.0), f"{top.descriptor}/{bot.descriptor}", True, 1.0)
