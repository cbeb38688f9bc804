"""Entropy numbers of the embedding l_p^d -> l_inf^d (non-dyadic, covering by cubes)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import PreconditionError
from .lattice import lambda_power, log_volume_pball, quasi_exponent, volume_pball
from .weights import format_p


@dataclass(frozen=True)
class EntropyEstimate:
    n: int
    d: int
    p: float
    lower: float
    upper: float
    exact: Optional[float] = None
    provenance: dict = field(default_factory=dict)

    @property
    def midpoint(self) -> float:
        if self.exact is not None:
            return self.exact
        return math.sqrt(self.lower * self.upper)

    def to_json(self) -> dict:
        return {
            "n": str(self.n),
            "d": self.d,
            "p": format_p(self.p),
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "provenance": dict(self.provenance),
        }


def iroot(n: int, d: int) -> int:
    """Largest m with m^d <= n, exact for arbitrarily large n (integer Newton)."""
    if n < 1:
        return 0
    if d == 1:
        return n
    x = 1 << -(-n.bit_length() // d)  # x^d >= n
    while True:
        y = ((d - 1) * x + n // x ** (d - 1)) // d
        if y >= x:
            break
        x = y
    while x**d > n:
        x -= 1
    while (x + 1) ** d <= n:
        x += 1
    return x


def entropy_exact_linf(n: int, d: int) -> float:
    """Exact epsilon_n(B_inf^d, l_inf^d): 1 for n < 2^d, else 1/floor(n^(1/d))."""
    if n < 1 or d < 1:
        raise PreconditionError("n and d must be positive")
    if n < 2**d:
        return 1.0
    return 1.0 / iroot(n, d)


def volume_lower(n: int, d: int, p: float) -> float:
    """1/2 (vol(B_p^d)/n)^(1/d): n cubes of radius eps have volume n (2 eps)^d."""
    return 0.5 * math.exp((log_volume_pball(p, d) - math.log(n)) / d)


def large_n_upper(n: int, d: int, p: float) -> Optional[float]:
    """Upper bound from rounding to a scaled integer grid; None where it is vacuous.

    With q = min(1, p) the covering of B_p^d by cubes of radius 1/(2r) around
    the grid (1/r) Z^d needs at most vol(B_p^d) (r^q + 2^(1-q) lambda^q)^(d/q)
    cubes; solving for r at n cubes gives the bound below.
    """
    q = quasi_exponent(p)
    log_ratio = (math.log(n) - log_volume_pball(p, d)) * q / d
    inner = math.exp(log_ratio) - 2.0 ** (1 - q) * lambda_power(p, d)
    if inner <= 0:
        return None
    return 0.5 * inner ** (-1.0 / q)


def entropy_bounds(n: int, d: int, p: float) -> EntropyEstimate:
    """Certified interval for epsilon_n(B_p^d, l_inf^d)."""
    if n < 1 or d < 1:
        raise PreconditionError("n and d must be positive")
    if not p > 0:
        raise PreconditionError("p must be positive")
    linf = entropy_exact_linf(n, d)
    if math.isinf(p):
        return EntropyEstimate(n, d, p, linf, linf, linf, {"lower": "linf-exact", "upper": "linf-exact"})
    lower = volume_lower(n, d, p)
    prov = {"lower": "volume"}
    upper, prov["upper"] = linf, "linf-comparison"
    lemma = large_n_upper(n, d, p)
    if lemma is not None and lemma < upper:
        upper, prov["upper"] = lemma, "large-n-lemma"
    exact = None
    if d == 1:
        # every p-ball in one dimension is [-1, 1]
        exact = 1.0 / n
        lower = upper = exact
        prov = {"lower": "d1-exact", "upper": "d1-exact"}
    lower = min(lower, upper)
    return EntropyEstimate(n, d, p, lower, upper, exact, prov)


def entropy_reference(n: int, d: int, p: float, c_low: float = 1.0, c_high: float = 1.0) -> tuple[float, float]:
    """Uncertified reference shape, never used to certify anything.

    1 for n <= d, (log(1 + d/log n)/log n)^(1/p) up to 2^d, d^(-1/p) n^(-1/d) beyond,
    scaled by the given constants.
    """
    if n <= d or n < 2:
        shape = 1.0
    elif n <= 2**d:
        ln = math.log2(n)
        shape = (math.log2(1 + d / ln) / ln) ** (1.0 / p)
    else:
        shape = d ** (-1.0 / p) * n ** (-1.0 / d)
    return c_low * shape, c_high * shape


def entropy_limit_diagnostic(d: int, p: float, n_grid: Sequence[int]) -> list[tuple[int, float, float]]:
    """Rows (n, n^(1/d) * eps_n midpoint, 1/2 vol(B_p^d)^(1/d))."""
    if not n_grid:
        raise PreconditionError("n_grid must be nonempty")
    target = 0.5 * volume_pball(p, d) ** (1.0 / d)
    rows = []
    for n in n_grid:
        est = entropy_bounds(int(n), d, p)
        rows.append((int(n), math.exp(math.log(n) / d) * est.midpoint, target))
    return rows
