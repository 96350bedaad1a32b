"""Numeric predicates and geometry for the chamber of charges under which all
point classes stay stable.

A charge is the linear map Z(r, d, c) = -c + a d + b r determined by a pair
of complex parameters (a, b).  With B = -Im b / Im a, membership in the
geometric chamber is cut out by three inequalities: Im a > 0, a bound against
the boundary envelope delta(B), and a sharper bound against Delta_B whenever
B is itself an exceptional slope.  This module evaluates those predicates
with signed margins, the boundary path and its half-plane, the support
constants controlling charge deformations, the wall trichotomy at the
chamber boundary, and the semicircles carved out by ordered collections in
the (t, m) slice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from .exceptional import (
    ExceptionalSlope,
    delta_dp,
    delta_dp_values,
    enumerate_exceptional,
    slope_lookup,
)
from .ktheory import CH_SKYSCRAPER, ChernClass, CollectionTriple

#: continued-fraction reconstruction bound for matching B to a rational slope
_MAX_DENOMINATOR = 10_000


@dataclass(frozen=True)
class ChargeParams:
    """The complex pair (a, b) of a central charge -c + a d + b r."""

    a: complex
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))

    @property
    def B(self) -> float:
        if self.a.imag == 0:
            raise ValueError("B undefined: Im a = 0")
        return -self.b.imag / self.a.imag


@dataclass(frozen=True)
class ChamberVerdict:
    member: bool
    failed_rule: str  # "Im-a" | "generic-slope" | "exceptional-slope" | "none"
    witness: Optional[ExceptionalSlope]
    margin: float

    def __post_init__(self):
        if self.member != (self.failed_rule == "none"):
            raise ValueError("member must mean failed_rule == 'none'")


@dataclass(frozen=True)
class WallReport:
    on_wall: bool
    slope: Optional[ExceptionalSlope]
    side: Optional[str]  # "plus" | "minus" | "degenerate"
    jh_sub: Optional[ChernClass]
    jh_quot: Optional[ChernClass]


def central_charge(p: ChargeParams, x: ChernClass) -> complex:
    """Z(x) = -c + a d + b r."""
    return -float(x.c) + p.a * x.d + p.b * x.r


def params_from_tm(t: float, m: float) -> ChargeParams:
    """Charge of the exponential form along the (t, m) slice: a = t + i m,
    b = -(t + i m)^2 / 2.  Requires m > 0."""
    if not m > 0:
        raise ValueError("need m > 0")
    w = complex(t, m)
    return ChargeParams(w, -w * w / 2)


def _match_exceptional(B: float, depth: int, tol: float) -> Optional[ExceptionalSlope]:
    cand = Fraction(B).limit_denominator(_MAX_DENOMINATOR)
    if abs(float(cand) - B) > tol:
        return None
    return slope_lookup(cand, depth)


def in_geometric_chamber(p: ChargeParams, depth: int, tol: float = 1e-9) -> ChamberVerdict:
    """Membership test for the geometric chamber with signed margins.

    Rules are checked tightest first: Im a > 0; then, when B matches an
    exceptional slope at this depth (rational reconstruction within tol),
    Re b > -B Re a - Delta_B + B^2/2; then the envelope inequality
    Re b > -B Re a - delta(B) + B^2/2.  Strict means margin > tol.  The
    reported margin of a member is the minimum slack over the applied rules.
    """
    margin_a = p.a.imag
    if margin_a <= tol:
        return ChamberVerdict(False, "Im-a", None, margin_a)
    B = p.B
    base = p.b.real + B * p.a.real - B * B / 2
    margins = [margin_a]
    witness: Optional[ExceptionalSlope] = None
    exc = _match_exceptional(B, depth, tol)
    if exc is not None:
        margin_exc = base + float(exc.disc)
        if margin_exc <= tol:
            return ChamberVerdict(False, "exceptional-slope", exc, margin_exc)
        margins.append(margin_exc)
        witness = exc
    delta, delta_witness = delta_dp(B, depth)
    margin_gen = base + delta
    if margin_gen <= tol:
        return ChamberVerdict(False, "generic-slope", delta_witness, margin_gen)
    margins.append(margin_gen)
    margin = min(margins)
    if witness is None or margin == margin_gen:
        witness = delta_witness
    return ChamberVerdict(True, "none", witness, margin)


def in_stab_g(p: ChargeParams) -> bool:
    """The larger open region Im a > 0, Re b > -B Re a + B^2/2 (strict)."""
    if not p.a.imag > 0:
        return False
    B = p.B
    return p.b.real + B * p.a.real - B * B / 2 > 0


def gamma_path_point(p: ChargeParams, t: float, depth: int) -> complex:
    """Point of the boundary path at parameter t.

    x(t) = Re b + (Re a)^2/2 + delta(t) - (t - Re a)^2/2,  y(t) = Im a t + Im b.
    """
    delta, _ = delta_dp(float(t), depth)
    x = p.b.real + p.a.real ** 2 / 2 + delta - (t - p.a.real) ** 2 / 2
    y = p.a.imag * t + p.b.imag
    return complex(x, y)


def in_S_ab(p: ChargeParams, z: complex, depth: int) -> bool:
    """Whether z lies on or to the right of the boundary path."""
    if p.a.imag == 0:
        raise ValueError("need Im a != 0 to invert y(t)")
    t = (z.imag - p.b.imag) / p.a.imag
    return z.real >= gamma_path_point(p, t, depth).real


def matrix_norm_N(p: ChargeParams) -> float:
    """Sup-norm of the inverse of [[1,0,0],[Im b, Im a, 0],[Re b, Re a, -1]]."""
    if p.a.imag == 0:
        raise ValueError("matrix is singular: Im a = 0")
    m = np.array(
        [
            [1.0, 0.0, 0.0],
            [p.b.imag, p.a.imag, 0.0],
            [p.b.real, p.a.real, -1.0],
        ]
    )
    return float(np.linalg.norm(np.linalg.inv(m), np.inf))


def _golden_min(f, lo: float, hi: float, iters: int = 90) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if hi - lo < 1e-13 * (1.0 + abs(lo) + abs(hi)):
            break
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = f(d)
    return min(fc, fd)


def _charge_ray_distance(w: complex) -> float:
    """Distance from w to the ray w + t, t >= 0 translated to the origin:
    inf over t >= 0 of |w + t|."""
    return abs(w.imag) if w.real <= 0 else abs(w)


def _exceptional_charge(s: ExceptionalSlope, p: ChargeParams) -> complex:
    """Z(E)/r for the exceptional bundle of slope s: Delta - alpha^2/2 + a alpha + b."""
    alpha = float(s.alpha)
    return float(s.disc) - alpha * alpha / 2 + p.a * alpha + p.b


def s_min(p: ChargeParams, depth: int = 12, grid: int = 2048) -> float:
    """Lower bound datum for the support property: the minimum of the path
    distance to the origin and the exceptional-charge distances to leftward
    rays.  Grid estimate at the given resolution, refined by golden section.
    """
    verdict = in_geometric_chamber(p, depth)
    if not verdict.member:
        raise ValueError(f"parameters outside the chamber ({verdict.failed_rule})")
    ima = p.a.imag
    B = p.B

    # exceptional part: |Z(E)/r + t| over t >= 0, pruned by |Im| growth
    incumbent = _charge_ray_distance(_exceptional_charge(delta_dp(B, depth)[1], p))
    window = incumbent / ima + 1e-12
    e_min = incumbent
    lo = Fraction(B - window).limit_denominator(10**9)
    hi = Fraction(B + window).limit_denominator(10**9)
    for s in enumerate_exceptional(lo - 1, hi + 1, depth):
        d = _charge_ray_distance(_exceptional_charge(s, p))
        if d < e_min:
            e_min = d

    # path part: |gamma(t)| can only beat the incumbent where |y(t)| allows
    def gamma_abs2(t: float) -> float:
        return abs(gamma_path_point(p, t, depth)) ** 2

    g_min = min(abs(gamma_path_point(p, B, depth)), abs(gamma_path_point(p, p.a.real, depth)))
    for _ in range(2):
        window = min(g_min, e_min) / ima
        ts = np.linspace(B - window, B + window, grid)
        xs = (
            p.b.real
            + p.a.real ** 2 / 2
            + delta_dp_values(ts, depth)[0]
            - (ts - p.a.real) ** 2 / 2
        )
        ys = ima * ts + p.b.imag
        vals = xs * xs + ys * ys
        order = np.argsort(vals)
        for idx in order[:3]:
            i = int(idx)
            lo_t = ts[max(i - 1, 0)]
            hi_t = ts[min(i + 1, len(ts) - 1)]
            g_min = min(g_min, math.sqrt(_golden_min(gamma_abs2, lo_t, hi_t)))
    return min(g_min, e_min)


def support_constant(p: ChargeParams, depth: int = 12, grid: int = 2048) -> float:
    """min(s_min, 1) / N; strictly positive on the chamber."""
    return min(s_min(p, depth, grid), 1.0) / matrix_norm_N(p)


def deformation_radius(p: ChargeParams, depth: int = 12, grid: int = 2048) -> float:
    """sin(pi/8) times the support constant: the safe deformation radius."""
    return math.sin(math.pi / 8) * support_constant(p, depth, grid)


def exceptional_chern(s: ExceptionalSlope) -> ChernClass:
    """Chern class (r, r alpha, r(alpha^2/2 - Delta)) of the bundle at slope s."""
    r = s.rank
    d = r * s.alpha
    if d.denominator != 1:
        raise ValueError("rank does not clear the slope denominator")
    c = r * (s.alpha * s.alpha / 2 - s.disc)
    return ChernClass(r, d.numerator, c)


def wall_test(p: ChargeParams, depth: int, tol: float = 1e-9) -> WallReport:
    """Boundary trichotomy at (a, b): detects the codimension-one walls.

    A point is on a wall when B matches an exceptional slope alpha and
    Delta_alpha < -Re b - B Re a + B^2/2 < delta(B), strictly within tol.
    The side is labeled by the sign of Im Z(E) after bumping b upward by
    i tol Im a (the plus wall is the one whose charge enters the upper half
    plane under that bump); it is degenerate when the whole image of the
    charge is real-collinear within tol.
    """
    if not p.a.imag > 0:
        raise ValueError("need Im a > 0")
    if p.a.imag <= tol and abs(p.b.imag) <= tol:
        return WallReport(False, None, "degenerate", None, None)
    B = p.B
    exc = _match_exceptional(B, depth, tol)
    if exc is None:
        return WallReport(False, None, None, None, None)
    v = -p.b.real - B * p.a.real + B * B / 2
    delta, _ = delta_dp(B, depth)
    if not (float(exc.disc) + tol < v < delta - tol):
        return WallReport(False, exc, None, None, None)
    bump = exc.rank * p.a.imag * (float(exc.alpha) - B + tol)
    side = "plus" if bump >= 0 else "minus"
    e_class = exceptional_chern(exc)
    stack = e_class.scale(exc.rank)
    if side == "plus":
        jh_sub, jh_quot = stack, CH_SKYSCRAPER - stack
    else:
        jh_sub, jh_quot = CH_SKYSCRAPER - stack, stack
    return WallReport(True, exc, side, jh_sub, jh_quot)


def semicircle(coll: CollectionTriple) -> Tuple[Fraction, Fraction]:
    """Center C and squared radius rho of the collection's semicircle in the
    (t, m) slice, exactly in rationals."""
    if coll.bundle_data is None:
        raise ValueError("semicircle needs underlying bundle data")
    e0, _, e2 = coll.bundle_data
    mu0, mu2 = e0.slope(), e2.slope()
    if mu0 == mu2:
        raise ValueError("semicircle undefined: equal outer slopes")
    if mu0 > mu2:
        raise ValueError("need mu0 < mu2")
    d0, d2 = e0.discriminant(), e2.discriminant()
    shear = (d0 - d2) / (mu2 - mu0)
    center = (mu0 + mu2) / 2 + shear
    rho = shear * shear + (mu2 - mu0) ** 2 / 4 - (d0 + d2)
    return center, rho


def semicircle_contains(center: Fraction, rho: Fraction, t: float, m: float) -> bool:
    """Whether (t, m) lies inside the open semicircle."""
    return m > 0 and (t - float(center)) ** 2 + m * m < float(rho)
