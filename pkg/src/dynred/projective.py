"""Points of P^1(Q), Moebius maps and good reduction of finite point sets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .core_arith import as_fraction, format_rational, is_s_unit, prime_support

__all__ = [
    "INF",
    "ONE",
    "ZERO",
    "Mobius",
    "ProjPoint",
    "apply_mobius",
    "cross_determinant",
    "is_mobius_s_integral",
    "make_point_set",
    "normalize_point",
    "point_from_json",
    "point_to_json",
    "reduce_point_mod_p",
    "set_bad_primes",
    "three_point_mobius",
]


@dataclass(frozen=True, order=False)
class ProjPoint:
    """A point ``[a : b]`` with ``gcd(a, b) = 1`` and ``b > 0``, or ``[1 : 0]``."""

    a: int
    b: int

    def __post_init__(self):
        a, b = self.a, self.b
        if (a, b) == (0, 0) or math.gcd(a, b) != 1 or b < 0 or (b == 0 and a != 1):
            raise ValueError(f"[{a}:{b}] is not normalized; use normalize_point")

    @classmethod
    def from_value(cls, value) -> "ProjPoint":
        """Build from an affine rational, or from ``"inf"``."""
        if isinstance(value, ProjPoint):
            return value
        if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        q = as_fraction(value)
        return cls(q.numerator, q.denominator)

    @property
    def is_infinity(self) -> bool:
        return self.b == 0

    def affine(self) -> Fraction:
        if self.b == 0:
            raise ValueError("the point at infinity has no affine coordinate")
        return Fraction(self.a, self.b)

    def sort_key(self):
        return (1, Fraction(0)) if self.b == 0 else (0, Fraction(self.a, self.b))

    def __lt__(self, other: "ProjPoint") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return "inf" if self.b == 0 else format_rational(Fraction(self.a, self.b))


def normalize_point(a: int, b: int) -> ProjPoint:
    a, b = int(a), int(b)
    if a == 0 and b == 0:
        raise ValueError("[0:0] is not a point of P^1")
    g = math.gcd(a, b)
    a //= g
    b //= g
    if b < 0 or (b == 0 and a < 0):
        a, b = -a, -b
    return ProjPoint(a, b)


ZERO = ProjPoint(0, 1)
ONE = ProjPoint(1, 1)
INF = ProjPoint(1, 0)


def make_point_set(points: Iterable) -> tuple[ProjPoint, ...]:
    """Sorted tuple of distinct points; duplicates are an error."""
    pts = [p if isinstance(p, ProjPoint) else ProjPoint.from_value(p) for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError("point set contains repeated points")
    return tuple(sorted(pts))


@dataclass(frozen=True)
class Mobius:
    """``x -> (m11 x + m12) / (m21 x + m22)`` as a primitive integer matrix.

    Scaling is fixed by gcd 1 and the first nonzero entry among
    ``m22, m21, m12, m11`` being positive.
    """

    m11: int
    m12: int
    m21: int
    m22: int

    def __post_init__(self):
        if self.det == 0:
            raise ValueError("singular matrix")
        if math.gcd(math.gcd(self.m11, self.m12), math.gcd(self.m21, self.m22)) != 1:
            raise ValueError("entries must have gcd 1; use Mobius.normalized")

    @classmethod
    def normalized(cls, m11: int, m12: int, m21: int, m22: int) -> "Mobius":
        entries = [int(m11), int(m12), int(m21), int(m22)]
        g = 0
        for e in entries:
            g = math.gcd(g, e)
        if g == 0:
            raise ValueError("zero matrix")
        entries = [e // g for e in entries]
        lead = next(e for e in (entries[3], entries[2], entries[1], entries[0]) if e)
        if lead < 0:
            entries = [-e for e in entries]
        return cls(*entries)

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> int:
        return self.m11 * self.m22 - self.m12 * self.m21

    def inverse(self) -> "Mobius":
        return Mobius.normalized(self.m22, -self.m12, -self.m21, self.m11)

    def compose(self, other: "Mobius") -> "Mobius":
        """``self o other``."""
        a, b, c, d = self.m11, self.m12, self.m21, self.m22
        e, f, g, h = other.m11, other.m12, other.m21, other.m22
        return Mobius.normalized(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def __call__(self, point) -> ProjPoint:
        return apply_mobius(self, point)

    def to_json(self) -> list[list[int]]:
        return [[self.m11, self.m12], [self.m21, self.m22]]

    @classmethod
    def from_json(cls, data) -> "Mobius":
        (m11, m12), (m21, m22) = data
        return cls.normalized(int(m11), int(m12), int(m21), int(m22))


def apply_mobius(phi: Mobius, point) -> ProjPoint:
    point = ProjPoint.from_value(point)
    a, b = point.a, point.b
    return normalize_point(phi.m11 * a + phi.m12 * b, phi.m21 * a + phi.m22 * b)


def cross_determinant(p: ProjPoint, q: ProjPoint) -> int:
    return p.a * q.b - q.a * p.b


def set_bad_primes(points: Sequence[ProjPoint]) -> tuple[int, ...]:
    """Primes at which two of the points collide; the set has good reduction
    outside ``S`` iff this is contained in ``S``."""
    bad: set[int] = set()
    for p, q in combinations(points, 2):
        delta = cross_determinant(p, q)
        if delta == 0:
            raise ValueError(f"repeated point {p}")
        bad.update(prime_support(delta))
    return tuple(sorted(bad))


def is_mobius_s_integral(phi: Mobius, primes: Iterable[int]) -> bool:
    return is_s_unit(phi.det, primes)


def three_point_mobius(p1: ProjPoint, p2: ProjPoint, p3: ProjPoint) -> Mobius:
    """The Moebius map sending ``p1, p2, p3`` to ``0, 1, inf``.

    Its determinant is ``-c(p2,p3) c(p2,p1) c(p1,p3)`` up to content, so it is
    a unit at every prime where the three points stay distinct.
    """
    if len({p1, p2, p3}) != 3:
        raise ValueError("three_point_mobius needs three distinct points")
    # row 1 vanishes at p1, row 2 at p3; scale so that p2 lands on [1:1]
    c23 = cross_determinant(p2, p3)
    c21 = cross_determinant(p2, p1)
    return Mobius.normalized(c23 * p1.b, -c23 * p1.a, c21 * p3.b, -c21 * p3.a)


def reduce_point_mod_p(point: ProjPoint, p: int) -> tuple[int, int]:
    """The reduction in P^1(F_p) as ``(x, 1)`` or ``(1, 0)``."""
    a, b = point.a % p, point.b % p
    if b == 0:
        return (1, 0)
    return (a * pow(b, -1, p) % p, 1)


def point_to_json(point: ProjPoint) -> list[str]:
    return [str(point.a), str(point.b)]


def point_from_json(data) -> ProjPoint:
    """Accepts ``[a, b]`` (ints or integer strings), ``"inf"`` or an affine
    rational (number or ``"p/q"`` string)."""
    if isinstance(data, (list, tuple)):
        if len(data) != 2:
            raise ValueError(f"point needs two coordinates, got {data!r}")
        return normalize_point(int(data[0]), int(data[1]))
    if isinstance(data, float):
        raise ValueError("floating point coordinates are not accepted")
    return ProjPoint.from_value(data)
