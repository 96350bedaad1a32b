"""Exceptional slopes on the plane and the boundary curve they carve out.

The slopes of exceptional bundles are exactly the values of a recursion
indexed by dyadic rationals p/2^q: integers map to themselves, and the new
slope at the midpoint of two adjacent dyadics is the weighted mean

    x . y = (x + y)/2 + (Delta_y - Delta_x) / (3 + x - y),

where a slope alpha carries rank r_alpha (the denominator of alpha) and
discriminant Delta_alpha = (1 - 1/r_alpha^2)/2.  The associated quadratic
polynomials

    p_alpha(x) = P(-|x - alpha|) - Delta_alpha,      P(X) = 1 + 3X/2 + X^2/2

have as upper envelope the boundary function delta(mu) in [1/2, 1]; rational
Chern data (r, mu, Delta) with Delta at or above the envelope (plus two
integrality conditions) is exactly the data of non-exceptional stable
sheaves.

The recursion and the envelope are evaluated in exact rational arithmetic;
real-valued entry points use floats, falling back to Fractions whenever the
inputs are rational so that identities like periodicity hold exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

Rational = Union[int, Fraction]

HALF = Fraction(1, 2)

#: band (in envelope units) inside which float prefiltering hands over to
#: exact arithmetic; float rounding here is ~1e-15, so this is generous
_EXACT_BAND = 1e-9


@dataclass(frozen=True)
class Dyadic:
    """A dyadic rational p/2^q in lowest terms (p odd whenever q > 0)."""

    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if q < 0:
            raise ValueError("q must be non-negative")
        while q > 0 and p % 2 == 0:
            p //= 2
            q -= 1
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, 2 ** self.q)

    @classmethod
    def from_rational(cls, x: Rational) -> "Dyadic":
        f = Fraction(x)
        q = f.denominator.bit_length() - 1
        if 2 ** q != f.denominator:
            raise ValueError(f"{x} is not a dyadic rational")
        return cls(f.numerator, q)

    def translate(self, n: int) -> "Dyadic":
        return Dyadic(self.p + n * 2 ** self.q, self.q)


@dataclass(frozen=True)
class ExceptionalSlope:
    """A slope alpha with its rank, discriminant and dyadic index."""

    alpha: Fraction
    rank: int
    disc: Fraction
    index: Dyadic

    def translate(self, n: int) -> "ExceptionalSlope":
        return ExceptionalSlope(self.alpha + n, self.rank, self.disc, self.index.translate(n))


def _slope_data(alpha: Rational) -> Tuple[Fraction, int, Fraction]:
    alpha = Fraction(alpha)
    rank = alpha.denominator
    disc = Fraction(rank * rank - 1, 2 * rank * rank)
    return alpha, rank, disc


def _make_slope(alpha: Fraction, index: Dyadic) -> ExceptionalSlope:
    alpha, rank, disc = _slope_data(alpha)
    return ExceptionalSlope(alpha, rank, disc, index)


def dot(a, b) -> Fraction:
    """The midpoint operation (alpha + beta)/2 + (Delta_b - Delta_a)/(3 + alpha - beta)."""
    alpha, _, da = _slope_data(a.alpha if isinstance(a, ExceptionalSlope) else a)
    beta, _, db = _slope_data(b.alpha if isinstance(b, ExceptionalSlope) else b)
    den = 3 + alpha - beta
    if den == 0:
        raise ValueError("dot undefined: 3 + alpha - beta = 0")
    return (alpha + beta) / 2 + (db - da) / den


@lru_cache(maxsize=None)
def _eps_unit(p: int, q: int) -> Fraction:
    """The recursion on the fundamental window: 0 <= p/2^q <= 1, reduced."""
    if q == 0:
        return Fraction(p)
    left = Dyadic(p - 1, q)
    right = Dyadic(p + 1, q)
    return dot(_eps_unit(left.p, left.q), _eps_unit(right.p, right.q))


def epsilon(x) -> ExceptionalSlope:
    """Evaluate the slope recursion at a dyadic rational.

    Integers map to themselves; the map commutes with integer translation.
    """
    d = x if isinstance(x, Dyadic) else Dyadic.from_rational(x)
    n = d.value.numerator // d.value.denominator  # floor
    base = d.translate(-n)
    alpha = _eps_unit(base.p, base.q)
    return _make_slope(alpha + n, d)


def p_poly(x):
    """P(X) = 1 + 3X/2 + X^2/2, exact on rationals."""
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return 1 + Fraction(3, 2) * x + x * x / 2
    return 1.0 + 1.5 * x + 0.5 * x * x


def p_alpha(a, x):
    """The boundary polynomial of a slope evaluated at x.

    Returns P(-|x - alpha|) - Delta_alpha inside the support |x - alpha| < 3
    and -Delta_alpha outside.  Exact when both arguments are rational.
    """
    if isinstance(a, ExceptionalSlope):
        alpha, disc = a.alpha, a.disc
    else:
        alpha, _, disc = _slope_data(a)
    exact = isinstance(x, (int, Fraction))
    if exact:
        t = abs(Fraction(x) - alpha)
        return (p_poly(-t) if t < 3 else Fraction(0)) - disc
    t = abs(float(x) - float(alpha))
    return (p_poly(-t) if t < 3.0 else 0.0) - float(disc)


@lru_cache(maxsize=None)
def _unit_slopes(depth: int) -> Tuple[ExceptionalSlope, ...]:
    """All slopes indexed by dyadics in [0, 1) of level <= depth, sorted."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    out = [_make_slope(Fraction(0), Dyadic(0, 0))]
    for q in range(1, depth + 1):
        for p in range(1, 2 ** q, 2):
            out.append(_make_slope(_eps_unit(p, q), Dyadic(p, q)))
    out.sort(key=lambda s: s.alpha)
    return tuple(out)


def enumerate_exceptional(lo: Rational, hi: Rational, depth: int) -> List[ExceptionalSlope]:
    """Slopes of dyadic level <= depth with lo <= alpha <= hi, sorted.

    Uses translation equivariance on the fundamental window, so both bounds
    are inclusive (a degenerate window [n, n] returns the single integer
    slope).
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError("need lo <= hi")
    unit = _unit_slopes(depth)
    out: List[ExceptionalSlope] = []
    n_lo = lo.numerator // lo.denominator
    n_hi = hi.numerator // hi.denominator
    for n in range(n_lo, n_hi + 2):
        for s in unit:
            a = s.alpha + n
            if lo <= a <= hi:
                out.append(s.translate(n))
    out.sort(key=lambda s: s.alpha)
    return out


@lru_cache(maxsize=None)
def _scan_table(depth: int):
    """Slopes covering [-3, 4), with parallel float arrays for fast scans.

    For mu reduced to [0, 1) every slope within the support window
    (mu - 3, mu + 3) appears here.
    """
    unit = _unit_slopes(depth)
    slopes: List[ExceptionalSlope] = []
    for n in range(-3, 4):
        slopes.extend(s.translate(n) for s in unit)
    slopes.sort(key=lambda s: s.alpha)
    alphas = np.array([float(s.alpha) for s in slopes])
    discs = np.array([float(s.disc) for s in slopes])
    return tuple(slopes), alphas, discs


def _reduce_mod_one(mu):
    if isinstance(mu, (int, Fraction)):
        mu = Fraction(mu)
        n = mu.numerator // mu.denominator
        return mu - n, n, True
    mu = float(mu)
    n = math.floor(mu)
    return mu - n, n, False


def _envelope_floats(f: float, alphas: np.ndarray, discs: np.ndarray) -> np.ndarray:
    t = np.abs(f - alphas)
    return np.where(t < 3.0, 1.0 - 1.5 * t + 0.5 * t * t - discs, -discs)


def delta_dp(mu, depth: int):
    """Lower approximation of the boundary envelope at mu, with witness.

    Maximizes p_alpha(mu) over the level <= depth enumeration; the result is
    monotone non-decreasing in depth.  Returns (value, witness slope); the
    value is a Fraction when mu is rational, a float otherwise.  Ties go to
    the smallest witnessing slope.
    """
    f, n, exact = _reduce_mod_one(mu)
    slopes, alphas, discs = _scan_table(depth)
    vals = _envelope_floats(float(f), alphas, discs)
    best = float(vals.max())
    if not exact:
        idx = int(np.flatnonzero(vals == best)[0])  # slopes sorted: first = smallest
        return best, slopes[idx].translate(n)
    candidates = np.flatnonzero(vals >= best - _EXACT_BAND)
    best_val: Optional[Fraction] = None
    best_idx = -1
    for i in candidates:
        v = p_alpha(slopes[int(i)], f)
        if best_val is None or v > best_val or (v == best_val and int(i) < best_idx):
            best_val, best_idx = v, int(i)
    return best_val, slopes[best_idx].translate(n)


def delta_dp_values(mus: Sequence[float], depth: int, chunk: int = 512):
    """Vectorized float envelope over many points; returns (values, witnesses)."""
    slopes, alphas, discs = _scan_table(depth)
    mus = np.asarray(mus, dtype=float)
    ns = np.floor(mus).astype(int)
    fs = mus - ns
    values = np.empty_like(fs)
    witnesses: List[ExceptionalSlope] = []
    for start in range(0, len(fs), chunk):
        block = fs[start : start + chunk]
        t = np.abs(block[:, None] - alphas[None, :])
        vals = np.where(t < 3.0, 1.0 - 1.5 * t + 0.5 * t * t - discs[None, :], -discs[None, :])
        idx = np.argmax(vals, axis=1)  # first max = smallest slope
        values[start : start + chunk] = vals[np.arange(len(block)), idx]
        witnesses.extend(slopes[int(i)] for i in idx)
    witnesses = [w.translate(int(n)) for w, n in zip(witnesses, ns)]
    return values, witnesses


def _interval_slopes_below_rank(
    left: ExceptionalSlope, right: ExceptionalSlope, limit: int, out: List[ExceptionalSlope],
    depth_cap: int = 64,
) -> None:
    """Collect interior slopes of rank < limit between two adjacent nodes.

    Ranks strictly inside an interval are minimized at its midpoint, so the
    recursion stops as soon as the midpoint rank reaches the limit.  (This
    growth property is validated against exhaustive enumeration in the test
    suite.)
    """
    if depth_cap == 0:
        raise RuntimeError("rank-pruned enumeration exceeded the depth cap")
    mid = epsilon(Dyadic.from_rational((left.index.value + right.index.value) / 2))
    if mid.rank >= limit:
        return
    out.append(mid)
    _interval_slopes_below_rank(left, mid, limit, out, depth_cap - 1)
    _interval_slopes_below_rank(mid, right, limit, out, depth_cap - 1)


def slopes_below_rank(limit: int, lo: Rational, hi: Rational) -> List[ExceptionalSlope]:
    """All exceptional slopes of rank < limit in the open interval (lo, hi).

    Complete regardless of any dyadic depth bound: the tree is expanded until
    every midpoint rank reaches the limit.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if limit <= 1:
        return []
    out: List[ExceptionalSlope] = []
    n_lo = lo.numerator // lo.denominator
    n_hi = hi.numerator // hi.denominator
    for n in range(n_lo, n_hi + 1):
        left = epsilon(Dyadic(n, 0))
        right = epsilon(Dyadic(n + 1, 0))
        interior: List[ExceptionalSlope] = [left]
        _interval_slopes_below_rank(left, right, limit, interior)
        for s in interior:
            if lo < s.alpha < hi:
                out.append(s)
    # right edge of the last window
    edge = epsilon(Dyadic(n_hi + 1, 0))
    if lo < edge.alpha < hi:
        out.append(edge)
    out.sort(key=lambda s: s.alpha)
    return out


def dp_existence(r: int, mu: Rational, Delta: Rational, depth: int = 12) -> bool:
    """Arithmetic criterion for a stable sheaf of rank r, slope mu,
    discriminant Delta to exist.

    Checks (1) integrality: r*mu and r*(P(mu) - Delta) are integers, and
    (2) Delta >= p_alpha(mu) for every exceptional slope alpha of rank < r
    with |alpha - mu| < 3.  Condition (2) is evaluated over the complete
    (rank-pruned) enumeration, so the answer is exact for any depth; the
    depth argument only forces a minimum amount of pre-enumeration.
    """
    if not isinstance(r, int) or r <= 0:
        raise ValueError("rank must be a positive integer")
    mu, Delta = Fraction(mu), Fraction(Delta)
    if (r * mu).denominator != 1:
        return False
    if (r * (p_poly(mu) - Delta)).denominator != 1:
        return False
    for s in slopes_below_rank(r, mu - 3, mu + 3):
        if Delta < p_alpha(s, mu):
            return False
    return True


@lru_cache(maxsize=None)
def _unit_slope_index(depth: int):
    return {s.alpha: s for s in _unit_slopes(depth)}


def slope_lookup(alpha: Fraction, depth: int) -> Optional[ExceptionalSlope]:
    """The enumerated slope equal to alpha at the given depth, if any."""
    alpha = Fraction(alpha)
    n = alpha.numerator // alpha.denominator
    s = _unit_slope_index(depth).get(alpha - n)
    return s.translate(n) if s is not None else None
