"""Exact lattice-point counts in scaled l_p balls and hyperbolic crosses.

Counts are Python ints throughout. Three counting paths exist for balls:

* ``p = inf``: closed form ``(2 floor(r) + 1)^d``;
* integer ``p``: a dynamic program over (dimension, integer budget), where the
  budget is ``floor(r^p)`` computed in exact rational arithmetic;
* other ``p``: enumeration of sorted magnitude tuples with a float budget and a
  guard band; points inside the band are re-decided in 50-digit arithmetic and
  reported as boundary ties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import mpmath
import numpy as np

from .errors import AmbiguousBoundaryError, CountCeilingError, PreconditionError
from .weights import is_integer_p

DEFAULT_CEILING = 2**128
GUARD = 1e-9
# Enumeration of sorted tuples is done in numpy; beyond this many tuples we refuse.
DENSE_LEVELS = 2**22
TUPLE_LIMIT = 20_000_000
# element operations allowed in the integer-p level table (int64 / Python ints)
DP_WORK = 4_000_000_000
DP_WORK_OBJECT = 50_000_000
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class LatticeCount:
    value: int
    shape: str
    d: int
    r: float
    p: Optional[float] = None
    method: str = "exact-recursion"
    ties: int = 0

    def to_json(self) -> dict:
        from .weights import format_p

        out = {"shape": self.shape, "d": self.d, "r": self.r, "count": str(self.value), "method": self.method}
        if self.p is not None:
            out["p"] = format_p(self.p)
        if self.ties:
            out["boundary_ties"] = self.ties
        return out


@dataclass(frozen=True)
class RadiusAdjustment:
    r: float
    p: float
    d: int
    L: float
    l: Optional[float] = None  # noqa: E741


# volumes and radius adjustments -----------------------------------------------

def volume_pball(p: float, d: int) -> float:
    """Volume of the unit l_p ball, ``2^d Gamma(1+1/p)^d / Gamma(1+d/p)``."""
    if d < 1:
        raise PreconditionError("d must be >= 1")
    if math.isinf(p):
        return float(2**d)
    return math.exp(d * math.log(2.0) + d * math.lgamma(1.0 + 1.0 / p) - math.lgamma(1.0 + d / p))


def log_volume_pball(p: float, d: int) -> float:
    if math.isinf(p):
        return d * math.log(2.0)
    return d * math.log(2.0) + d * math.lgamma(1.0 + 1.0 / p) - math.lgamma(1.0 + d / p)


def quasi_exponent(p: float) -> float:
    """Exponent q of the q-triangle inequality the l_p (quasi-)norm satisfies."""
    return min(1.0, p)


def lambda_power(p: float, d: int) -> float:
    """``||(1,...,1)||_p^q`` with q = min(1, p)."""
    q = quasi_exponent(p)
    if math.isinf(p):
        return 1.0
    return d ** (q / p)


def adjusted_radii(r: float, p: float, d: int) -> tuple[Optional[float], float]:
    """Inner and outer radii ``l <= r <= L`` for any ``0 < p <= inf``.

    The union of unit cubes centred at lattice points of ``r B_p^d`` contains
    ``l B_p^d`` and is contained in ``L B_p^d``; the q-triangle inequality with
    q = min(1, p) is what makes both inclusions hold.
    """
    q = quasi_exponent(p)
    shift = lambda_power(p, d) / 2.0**q
    rq = r**q
    outer = (rq + shift) ** (1.0 / q)
    inner = (rq - shift) ** (1.0 / q) if rq > shift else None
    return inner, outer


def radius_adjust(r: float, p: float, d: int) -> RadiusAdjustment:
    if not 0 < p <= 1:
        raise PreconditionError("radius_adjust is defined for 0 < p <= 1")
    if r <= 0:
        raise PreconditionError("r must be positive")
    inner, outer = adjusted_radii(r, p, d)
    return RadiusAdjustment(r=r, p=p, d=d, L=outer, l=inner)


# integer-budget dynamic program ---------------------------------------------------

def _iroot_floor(x: int, k: int) -> int:
    """Largest t with t^k <= x."""
    if x < 0:
        return -1
    t = int(round(x ** (1.0 / k)))
    while t**k > x:
        t -= 1
    while (t + 1) ** k <= x:
        t += 1
    return t


def _zeros(n: int, big: bool) -> np.ndarray:
    if big:
        out = np.empty(n, dtype=object)
        out[:] = 0
        return out
    return np.zeros(n, dtype=np.int64)


def level_multiplicities_int(p: int, d: int, budget: int) -> np.ndarray:
    """``f[u] = #{k in Z^d : sum |k_j|^p = u}`` for ``0 <= u <= budget``.

    Row-by-row evaluation of ``C_j(u) = sum_t mult(t) C_{j-1}(u - t^p)``; the
    table over (dimension, budget) is the memo of the counting recursion.
    """
    budget = int(budget)
    top = _iroot_floor(budget, p)
    big = (2 * top + 1) ** d >= _INT64_SAFE
    if p == 1:
        return _l1_multiplicities(d, budget, big)
    work = (d - 1) * top * (budget + 1)
    if work > (DP_WORK_OBJECT if big else DP_WORK):
        raise CountCeilingError(f"level table for p={p}, d={d} up to {budget} is beyond the work budget")
    one = _zeros(budget + 1, big)
    one[0] = 1
    powers = [t**p for t in range(top + 1)]
    for t in range(1, top + 1):
        one[powers[t]] += 2
    f = one
    for _ in range(d - 1):
        g = _zeros(budget + 1, big)
        g += f
        for t in range(1, top + 1):
            off = powers[t]
            g[off:] += 2 * f[: budget + 1 - off]
        f = g
    return f


def _l1_multiplicities(d: int, budget: int, big: bool) -> np.ndarray:
    """``#{k : ||k||_1 = u} = sum_j 2^j C(d, j) C(u - 1, j - 1)``."""
    f = _zeros(budget + 1, big)
    f[0] = 1
    if budget == 0:
        return f
    u = np.arange(1, budget + 1, dtype=object if big else np.int64)
    binom = _zeros(budget, big) + 1  # C(u - 1, 0)
    for j in range(1, min(d, budget) + 1):
        if j > 1:
            binom = binom * (u - (j - 1)) // (j - 1)  # C(u-1, j-1) from C(u-1, j-2)
        f[1:] += (2**j * math.comb(d, j)) * binom
    return f


def _count_int_budget(p: int, d: int, budget: int) -> int:
    if budget < 0:
        return 0
    if p == 1:
        return sum(2**j * math.comb(d, j) * math.comb(budget, j) for j in range(min(d, budget) + 1))
    f = level_multiplicities_int(p, d, budget)
    return int(sum(f.tolist()))


# general-p tuple enumeration ------------------------------------------------------

def power_table(p: float, top: int) -> np.ndarray:
    """``float(t) ** p`` computed by Python, shared with scalar evaluation."""
    return np.array([float(t) ** p for t in range(top + 1)])


def _sorted_tuples(p: float, d: int, u_limit: float):
    """Nonincreasing magnitude tuples with canonical level sum <= u_limit.

    Returns (tuples as int array (m, d), levels u, multiplicities as int64).
    The level sum is accumulated smallest-first, matching ``norm_power``.
    """
    top = int(u_limit ** (1.0 / p)) if u_limit > 0 else 0
    while top > 0 and float(top) ** p > u_limit:
        top -= 1
    while float(top + 1) ** p <= u_limit:
        top += 1
    if top + 1 > TUPLE_LIMIT:
        raise CountCeilingError(f"enumeration needs more than {TUPLE_LIMIT} tuples")
    pw = power_table(p, top)
    # pruning uses a slightly looser bound; the canonical sums are filtered below
    loose = u_limit * (1 + 1e-12)
    cols = [np.arange(top + 1, dtype=np.int64)]
    partial = pw.copy()
    for _ in range(d - 1):
        last = cols[-1]
        vmax = np.searchsorted(pw, loose - partial, side="right") - 1
        # searchsorted on a difference can be off by one against the sum test
        up = np.minimum(vmax + 1, top)
        vmax = np.where((up > vmax) & (partial + pw[up] <= loose), up, vmax)
        down = np.maximum(vmax, 0)
        vmax = np.where((vmax >= 0) & (partial + pw[down] > loose), vmax - 1, vmax)
        counts = np.clip(np.minimum(last, vmax) + 1, 0, None)
        total = int(counts.sum())
        if total > TUPLE_LIMIT:
            raise CountCeilingError(f"enumeration needs more than {TUPLE_LIMIT} tuples")
        rows = np.repeat(np.arange(len(last)), counts)
        starts = np.cumsum(counts) - counts
        vals = np.arange(total, dtype=np.int64) - np.repeat(starts, counts)
        cols = [c[rows] for c in cols] + [vals]
        partial = partial[rows] + pw[vals]
    A = np.stack(cols, axis=1) if cols else np.zeros((1, 0), dtype=np.int64)
    # canonical smallest-first accumulation
    u = pw[A[:, d - 1]].copy()
    for j in range(d - 2, -1, -1):
        u = u + pw[A[:, j]]
    nz = (A > 0).sum(axis=1)
    run = np.ones(len(A), dtype=np.int64)
    denom = np.ones(len(A), dtype=np.int64)
    for j in range(1, d):
        eq = A[:, j] == A[:, j - 1]
        run = np.where(eq, run + 1, 1)
        denom *= run
    mult = (math.factorial(d) // 1) // denom * (np.int64(1) << nz)
    keep = u <= u_limit
    return A[keep], u[keep], mult[keep]


def _recover_rational(p: float) -> Fraction:
    return Fraction(p).limit_denominator(10**6)


def _exact_compare(tup, p: float, r: float) -> int:
    """Sign of ``sum |k_j|^p - r^p`` in 50-digit arithmetic; 0 means tie."""
    frac = _recover_rational(p)
    with mpmath.workdps(50):
        e = mpmath.mpf(frac.numerator) / frac.denominator
        lhs = mpmath.fsum(mpmath.mpf(int(a)) ** e for a in tup if a)
        rhs = mpmath.mpf(Fraction(r).numerator) / Fraction(r).denominator
        rhs = rhs**e
        diff = lhs - rhs
        if abs(diff) <= mpmath.mpf(10) ** -40 * max(1, abs(rhs)):
            return 0
        return 1 if diff > 0 else -1


def _count_general(p: float, d: int, r: float, strict: bool) -> tuple[int, int]:
    rp = float(r) ** p
    A, u, mult = _sorted_tuples(p, d, rp * (1 + GUARD))
    inside = u < rp * (1 - GUARD)
    total = int(mult[inside].sum())
    band = np.nonzero(~inside)[0]
    ties = 0
    for i in band:
        sign = _exact_compare(A[i].tolist(), p, r)
        if sign == 0:
            if strict:
                raise AmbiguousBoundaryError(f"point {A[i].tolist()} lies on the boundary of {r} B_{p}^{d}")
            ties += int(mult[i])
        if sign <= 0:
            total += int(mult[i])
    return total, ties


# public counting ---------------------------------------------------------------

def _estimate_pball(p: float, r: float, d: int) -> float:
    box = d * math.log2(2 * math.floor(r) + 1)
    if math.isinf(p):
        return box
    inner, outer = adjusted_radii(r, p, d)
    vol = (log_volume_pball(p, d) + d * math.log(outer)) / math.log(2.0)
    return min(box, vol)


def grid_count_pball(p: float, r: float, d: int, ceiling: int = DEFAULT_CEILING, strict: bool = False) -> LatticeCount:
    """Exact ``#{k in Z^d : ||k||_p <= r}``."""
    if r < 0:
        raise PreconditionError("radius must be nonnegative")
    if d < 1:
        raise PreconditionError("d must be >= 1")
    if _estimate_pball(p, r, d) > math.log2(ceiling):
        raise CountCeilingError(f"count in {r} B_{p}^{d} may exceed the ceiling 2^{math.log2(ceiling):.0f}")
    if math.isinf(p):
        return LatticeCount((2 * math.floor(r) + 1) ** d, "pball", d, r, p, "closed-form")
    if is_integer_p(p):
        ip = int(p)
        budget = math.floor(Fraction(r) ** ip)
        return LatticeCount(_count_int_budget(ip, d, budget), "pball", d, r, p, "exact-recursion")
    value, ties = _count_general(p, d, r, strict)
    return LatticeCount(value, "pball", d, r, p, "guarded-recursion", ties)


@lru_cache(maxsize=None)
def _count_A_int(R: int, l: int) -> int:
    if l == 1:
        return max(0, R - 1)
    total = 0
    # first coordinate k >= 1, remaining l-1 coordinates contribute a factor >= 2^(l-1)
    kmax = R // 2 ** (l - 1) - 1
    for k in range(1, kmax + 1):
        total += _count_A_int(R // (1 + k), l - 1)
    return total


def count_A(r: float, l: int) -> int:
    """``#{k in N^l : prod (1 + k_j) <= r}`` over strictly positive integers."""
    if l < 1:
        raise PreconditionError("l must be >= 1")
    if r < 1:
        return 0
    return _count_A_int(math.floor(r), l)


def grid_count_hyperbolic(r: float, d: int, ceiling: int = DEFAULT_CEILING) -> LatticeCount:
    """Exact ``#{k in Z^d : prod (1 + |k_j|) <= r}``.

    Uses ``1 + sum_l 2^l C(d, l) A(r, l)``: a point with exactly l nonzero
    coordinates has product at least 2^l, so l stops at ``floor(log2 r)``.
    """
    if r < 1:
        raise PreconditionError("hyperbolic cross needs r >= 1")
    R = math.floor(r)
    top = min(d, R.bit_length() - 1)
    total = 1
    for l in range(1, top + 1):
        total += 2**l * math.comb(d, l) * _count_A_int(R, l)
        if total > ceiling:
            raise CountCeilingError("hyperbolic count exceeds the ceiling")
    return LatticeCount(total, "hyperbolic", d, r, None, "exact-recursion")


def mixed_level_multiplicities(p: int, d: int, vmax: int) -> np.ndarray:
    """``f[v] = #{k : prod (1 + |k_j|^p) = v}`` for ``v <= vmax`` (Dirichlet convolution)."""
    vmax = int(vmax)
    big = (2 * vmax + 1) ** min(d, 64) >= _INT64_SAFE
    one = _zeros(vmax + 1, big)
    if vmax >= 1:
        one[1] = 1
    t = 1
    while 1 + t**p <= vmax:
        one[1 + t**p] += 2
        t += 1
    support = [a for a in range(1, vmax + 1) if one[a]]
    f = one
    for _ in range(d - 1):
        g = _zeros(vmax + 1, big)
        for a in support:
            m = vmax // a
            g[a : a * m + 1 : a] += one[a] * f[1 : m + 1]
        f = g
    return f


# shells ----------------------------------------------------------------------

@dataclass
class Shells:
    """Distinct levels ``u`` present in the ball, ascending, with exact multiplicities."""

    levels: np.ndarray
    mults: list
    outside: float  # every lattice point not listed has level >= outside (strictly > for general p)
    near_ties: np.ndarray  # indices i where levels[i] and levels[i+1] agree to 1e-12


def pball_shells(p: float, d: int, u_limit: float) -> Shells:
    """All lattice points with level ``u <= u_limit`` grouped by level."""
    if math.isinf(p):
        m = math.floor(u_limit)
        levels = np.arange(m + 1, dtype=np.int64)
        mults = [1] + [(2 * j + 1) ** d - (2 * j - 1) ** d for j in range(1, m + 1)]
        return Shells(levels, mults, float(m + 1), np.zeros(0, dtype=np.int64))
    if is_integer_p(p):
        B = math.floor(u_limit)
        if B > DENSE_LEVELS:
            # few occupied levels relative to the budget: enumerate sorted tuples,
            # whose float levels are exact integers below 2^53
            _, u, mult = _sorted_tuples(p, d, float(B))
            order = np.argsort(u, kind="stable")
            u, mult = u[order].astype(np.int64), mult[order]
            levels, start = np.unique(u, return_index=True)
            sums = np.add.reduceat(mult, start)
            return Shells(levels, [int(x) for x in sums.tolist()], float(B + 1), np.zeros(0, dtype=np.int64))
        f = level_multiplicities_int(int(p), d, B)
        idx = np.nonzero(f != 0)[0]
        return Shells(idx.astype(np.int64), [int(x) for x in f[idx].tolist()], float(B + 1), np.zeros(0, dtype=np.int64))
    _, u, mult = _sorted_tuples(p, d, u_limit)
    order = np.argsort(u, kind="stable")
    u, mult = u[order], mult[order]
    levels, start = np.unique(u, return_index=True)
    sums = np.add.reduceat(mult, start) if len(u) else np.zeros(0, dtype=np.int64)
    close = np.nonzero(np.diff(levels) <= 1e-12 * np.maximum(levels[1:], 1.0))[0]
    return Shells(levels, [int(x) for x in sums.tolist()], float(u_limit), close)


def mixed_shells(p: float, d: int, vmax: float) -> Shells:
    if not is_integer_p(p):
        raise PreconditionError("exact mixed counting needs integer p")
    V = math.floor(vmax)
    f = mixed_level_multiplicities(int(p), d, V)
    idx = np.nonzero(f != 0)[0]
    return Shells(idx.astype(np.int64), [int(x) for x in f[idx].tolist()], float(V + 1), np.zeros(0, dtype=np.int64))
