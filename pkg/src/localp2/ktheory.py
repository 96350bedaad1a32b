"""Exact K-group arithmetic for sheaves supported on the plane inside its
canonical cone.

A class is stored as the Chern character triple (r, d, c) of its pushforward
to the plane: rank, degree, and the half-integral point coefficient.  On this
lattice live the two Euler pairings (the plane pairing and the skew pairing of
the three-dimensional cone), spherical twists, twisting by O(1), the braid
group acting on ordered triples by mutation, and the 2x2 matrices of the
congruence group generated by the two basic autoequivalences.

Everything here is exact: ranks and degrees are integers, c is a rational
with denominator dividing 2.  No floats enter this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Tuple


def _as_int(value, name: str) -> int:
    if isinstance(value, bool):
        raise TypeError(f"{name} must be an integer, not bool")
    if isinstance(value, int):
        return value
    f = Fraction(value)
    if f.denominator != 1:
        raise ValueError(f"{name} must be an integer, got {value!r}")
    return f.numerator


@dataclass(frozen=True)
class ChernClass:
    """Chern character triple (r, d, c) with 2c integral."""

    r: int
    d: int
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", _as_int(self.r, "r"))
        object.__setattr__(self, "d", _as_int(self.d, "d"))
        c = Fraction(self.c)
        if (2 * c).denominator != 1:
            raise ValueError(f"c must be a half-integer, got {c}")
        object.__setattr__(self, "c", c)

    def __add__(self, other: "ChernClass") -> "ChernClass":
        return ChernClass(self.r + other.r, self.d + other.d, self.c + other.c)

    def __sub__(self, other: "ChernClass") -> "ChernClass":
        return ChernClass(self.r - other.r, self.d - other.d, self.c - other.c)

    def __neg__(self) -> "ChernClass":
        return ChernClass(-self.r, -self.d, -self.c)

    def scale(self, k: int) -> "ChernClass":
        k = _as_int(k, "k")
        return ChernClass(k * self.r, k * self.d, k * self.c)

    def slope(self) -> Fraction:
        if self.r == 0:
            raise ValueError("slope undefined for rank zero")
        return Fraction(self.d, self.r)

    def discriminant(self) -> Fraction:
        if self.r == 0:
            raise ValueError("discriminant undefined for rank zero")
        return Fraction(self.d * self.d, 2 * self.r * self.r) - Fraction(self.c, self.r)

    def astuple(self) -> Tuple[int, int, Fraction]:
        return (self.r, self.d, self.c)


def ch_line_bundle(n: int) -> ChernClass:
    """Chern character (1, n, n^2/2) of the degree-n line bundle."""
    n = _as_int(n, "n")
    return ChernClass(1, n, Fraction(n * n, 2))


CH_O = ch_line_bundle(0)
CH_SKYSCRAPER = ChernClass(0, 0, Fraction(1))
#: cotangent twist, from the Euler sequence: 3*ch(O) - ch(O(1))
CH_OMEGA1 = ChernClass(2, -1, Fraction(-1, 2))


def tensor_O1(x: ChernClass) -> ChernClass:
    """Multiply by ch(O(1)): (r, d, c) -> (r, d + r, c + d + r/2)."""
    return ChernClass(x.r, x.d + x.r, x.c + x.d + Fraction(x.r, 2))


def shift(x: ChernClass, k: int) -> ChernClass:
    """Homological shift [k]; acts on the K-group by (-1)^k."""
    k = _as_int(k, "k")
    return x if k % 2 == 0 else -x


def euler_p2(x: ChernClass, y: ChernClass) -> Fraction:
    """Euler pairing chi(x, y) on the plane, by Riemann-Roch."""
    return (
        x.r * y.c
        + y.r * x.c
        - Fraction(x.d * y.d)
        + Fraction(3, 2) * (x.r * y.d - y.r * x.d)
        + x.r * y.r
    )


def euler_skew(x: ChernClass, y: ChernClass) -> int:
    """Skew Euler pairing of the cone: 3(r_x d_y - r_y d_x).

    Equals euler_p2(x, y) - euler_p2(y, x) identically.
    """
    return 3 * (x.r * y.d - y.r * x.d)


def spherical_twist_K(s: ChernClass, m: ChernClass) -> ChernClass:
    """Twist of m at the spherical class s: m - <s, m> s with the skew pairing.

    The caller is responsible for s actually being the class of a spherical
    object; that is not detectable from the triple alone.
    """
    return m - s.scale(euler_skew(s, m))


def phi_composite_K(x: ChernClass) -> ChernClass:
    """Twist at O composed with tensoring by O(1); an order-3 map.

    Explicit form: (r, d, c) -> (-2r - 3d, d + r, c + d + r/2).
    """
    return spherical_twist_K(CH_O, tensor_O1(x))


# ---------------------------------------------------------------------------
# group words


B3_LETTERS = ("t0", "t1", "t2", "t0'", "t1'", "t2'", "r")
GAMMA13_LETTERS = ("S", "T", "S'", "T'")


@dataclass(frozen=True)
class GroupWord:
    """A word over one of the two generator alphabets.

    group "b3": letters t0, t1, t2 (trailing apostrophe for the inverse)
    and the rotation r.  group "gamma13": letters S, T and their inverses.
    """

    letters: Tuple[str, ...]
    group: str = "b3"

    def __post_init__(self):
        alphabet = {"b3": B3_LETTERS, "gamma13": GAMMA13_LETTERS}.get(self.group)
        if alphabet is None:
            raise ValueError(f"unknown group {self.group!r}")
        object.__setattr__(self, "letters", tuple(self.letters))
        for letter in self.letters:
            if letter not in alphabet:
                raise ValueError(f"letter {letter!r} not in the {self.group} alphabet")

    def __len__(self) -> int:
        return len(self.letters)

    @classmethod
    def b3(cls, text: str) -> "GroupWord":
        """Parse a whitespace-separated braid word like "t1 t2' r"."""
        return cls(tuple(text.split()), "b3")

    @classmethod
    def gamma13(cls, text: str) -> "GroupWord":
        """Parse a compact congruence word like "STS'T'" (S' = S inverse)."""
        letters = []
        for ch in text:
            if ch in ("S", "T"):
                letters.append(ch)
            elif ch == "'":
                if not letters or letters[-1].endswith("'"):
                    raise ValueError(f"misplaced apostrophe in {text!r}")
                letters[-1] += "'"
            elif ch.isspace():
                continue
            else:
                raise ValueError(f"letter {ch!r} not in the gamma13 alphabet")
        return cls(tuple(letters), "gamma13")


Matrix2 = Tuple[Tuple[int, int], Tuple[int, int]]

GAMMA13_T: Matrix2 = ((1, 1), (0, 1))
GAMMA13_S: Matrix2 = ((1, 0), (-3, 1))
_GAMMA13_GEN = {
    "T": GAMMA13_T,
    "S": GAMMA13_S,
    "T'": ((1, -1), (0, 1)),
    "S'": ((1, 0), (3, 1)),
}


def _mat_mul(a: Matrix2, b: Matrix2) -> Matrix2:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def gamma13_matrix(w: GroupWord) -> Matrix2:
    """Evaluate a congruence-group word to its 2x2 integer matrix.

    The product is taken in word order (leftmost letter leftmost in the
    product), so "STSTST" evaluates to (S T)^3 = identity.
    """
    if isinstance(w, str):
        w = GroupWord.gamma13(w)
    if w.group != "gamma13":
        raise ValueError("expected a gamma13 word")
    out: Matrix2 = ((1, 0), (0, 1))
    for letter in w.letters:
        out = _mat_mul(out, _GAMMA13_GEN[letter])
    return out


# ---------------------------------------------------------------------------
# ordered triples and the braid action


def _is_exceptional_class(e: ChernClass) -> bool:
    """Whether e is the class of an exceptional bundle: positive rank,
    primitive slope, and discriminant (1 - 1/r^2)/2."""
    if e.r <= 0:
        return False
    if gcd(e.r, e.d) != 1:
        return False
    want = Fraction(e.r * e.r - 1, 2 * e.r * e.r)
    return e.discriminant() == want


@dataclass(frozen=True)
class CollectionTriple:
    """Ordered triple of K-classes, optionally with underlying bundle data.

    When bundle_data = (E0, E1, E2) is present the classes are required to be
    ([E2], -[E1], [E0]) and the bundles must form an exceptional collection:
    chi(Ej, Ei) = 0 for j > i.
    """

    classes: Tuple[ChernClass, ChernClass, ChernClass]
    bundle_data: Optional[Tuple[ChernClass, ChernClass, ChernClass]] = None

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if len(self.classes) != 3:
            raise ValueError("a collection triple has exactly three classes")
        if self.bundle_data is not None:
            object.__setattr__(self, "bundle_data", tuple(self.bundle_data))
            e0, e1, e2 = self.bundle_data
            if self.classes != (e2, -e1, e0):
                raise ValueError("classes must equal ([E2], -[E1], [E0])")
            for e in (e0, e1, e2):
                if e.r <= 0:
                    raise ValueError("bundle data requires positive ranks")
            for j in range(3):
                for i in range(j):
                    bj, bi = self.bundle_data[j], self.bundle_data[i]
                    if euler_p2(bj, bi) != 0:
                        raise ValueError(
                            f"chi(E{j}, E{i}) = {euler_p2(bj, bi)} != 0: "
                            "not an exceptional collection"
                        )

    @classmethod
    def from_bundles(cls, e0: ChernClass, e1: ChernClass, e2: ChernClass) -> "CollectionTriple":
        return cls((e2, -e1, e0), (e0, e1, e2))

    @classmethod
    def from_classes(cls, k0: ChernClass, k1: ChernClass, k2: ChernClass) -> "CollectionTriple":
        """Build a triple from raw classes, recovering bundle data when the
        sign pattern (+, -, +) holds and the triple is a genuine collection."""
        bundle_data = None
        if k0.r > 0 and k1.r < 0 and k2.r > 0:
            e2, e1, e0 = k0, -k1, k2
            if all(_is_exceptional_class(e) for e in (e0, e1, e2)):
                if (
                    euler_p2(e1, e0) == 0
                    and euler_p2(e2, e0) == 0
                    and euler_p2(e2, e1) == 0
                ):
                    bundle_data = (e0, e1, e2)
        return cls((k0, k1, k2), bundle_data)


#: the standard collection (O(-1), Omega(1), O)
E1_TRIPLE = CollectionTriple.from_bundles(ch_line_bundle(-1), CH_OMEGA1, CH_O)

Triple = Tuple[ChernClass, ChernClass, ChernClass]


def _tau1(k: Triple) -> Triple:
    k0, k1, k2 = k
    return (-k1, k0 - k1.scale(euler_skew(k1, k0)), k2)


def _tau1_inv(k: Triple) -> Triple:
    k0, k1, k2 = k
    return (k1 + k0.scale(euler_skew(k0, k1)), -k0, k2)


def _rot(k: Triple) -> Triple:
    return (k[2], k[0], k[1])


def _rot_inv(k: Triple) -> Triple:
    return (k[1], k[2], k[0])


def _conj(inner, outer, outer_inv):
    def act(k: Triple) -> Triple:
        return outer(inner(outer_inv(k)))

    return act


_B3_ACTION = {
    "t1": _tau1,
    "t1'": _tau1_inv,
    "t2": _conj(_tau1, _rot, _rot_inv),
    "t2'": _conj(_tau1_inv, _rot, _rot_inv),
    "t0": _conj(_tau1, _rot_inv, _rot),
    "t0'": _conj(_tau1_inv, _rot_inv, _rot),
    "r": _rot,
}


def braid_act(g: GroupWord, t: CollectionTriple) -> CollectionTriple:
    """Act by a braid word on a triple of K-classes.

    The word acts as a group element: the rightmost letter is applied first,
    so braid_act on the word "r t1 r r" agrees with the letter t2 (the
    conjugation relation of the generators).  Bundle data is re-derived from
    the resulting classes; it is absent whenever the image is not the K-shadow
    of an ordered collection (single rotations, for instance).
    """
    if isinstance(g, str):
        g = GroupWord.b3(g)
    if g.group != "b3":
        raise ValueError("expected a b3 word")
    k = tuple(t.classes)
    for letter in reversed(g.letters):
        k = _B3_ACTION[letter](k)
    return CollectionTriple.from_classes(*k)
