"""Degree-d endomorphisms of P^1 over Q in homogeneous integer coordinates.

A map is a pair of binary forms ``(F, G)`` of degree ``d``; ``F[i]`` and
``G[i]`` multiply ``X**(d-i) * Y**i`` and the affine map is
``x -> F(x, 1) / G(x, 1)``.

The resultant is the determinant of the ``2d x 2d`` Sylvester matrix whose
first ``d`` rows hold shifted copies of ``F[0..d]`` and last ``d`` rows shifted
copies of ``G[0..d]``. With this convention ``Res(x**2) = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import poly
from .core_arith import as_fraction, prime_support
from .projective import Mobius, ProjPoint, make_point_set, normalize_point, reduce_point_mod_p

__all__ = [
    "DEFAULT_BIT_BUDGET",
    "BadReductionError",
    "BudgetExceededError",
    "OrbitResult",
    "RatMap",
    "ReducedMap",
    "conjugate",
    "critical_divisor",
    "evaluate",
    "from_affine",
    "good_reduction_bad_primes",
    "iterate",
    "multiplier",
    "orbit",
    "pullback_form",
    "ramification_index",
    "ramification_index_mod_p",
    "rational_fixed_points",
    "rational_preimages",
    "reduce_map_mod_p",
    "resultant",
]

DEFAULT_BIT_BUDGET = 10**6


class BadReductionError(ValueError):
    pass


class BudgetExceededError(ValueError):
    pass


@dataclass(frozen=True)
class RatMap:
    d: int
    F: tuple
    G: tuple

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("degree must be at least 1")
        if len(self.F) != self.d + 1 or len(self.G) != self.d + 1:
            raise ValueError("F and G need d+1 coefficients each")
        if poly.content(self.F + self.G) != 1:
            raise ValueError("coefficients must have joint content 1; use RatMap.normalized")
        if resultant_of_forms(self.F, self.G) == 0:
            raise ValueError("degenerate map: F and G share a root")

    @classmethod
    def normalized(cls, F: Sequence[int], G: Sequence[int]) -> "RatMap":
        """Divide out the joint content and fix the overall sign.

        The first nonzero entry of ``G`` (or of ``F`` when ``G = 0``) is made
        positive.
        """
        F = tuple(int(x) for x in F)
        G = tuple(int(x) for x in G)
        if len(F) != len(G):
            raise ValueError("F and G must have the same length")
        g = poly.content(F + G)
        if g == 0:
            raise ValueError("degenerate map: F = G = 0")
        F = tuple(x // g for x in F)
        G = tuple(x // g for x in G)
        lead = next(x for x in G + F if x)
        if lead < 0:
            F = tuple(-x for x in F)
            G = tuple(-x for x in G)
        return cls(len(F) - 1, F, G)

    def __call__(self, point) -> ProjPoint:
        return evaluate(self, point)

    def to_json(self) -> dict:
        return {"d": self.d, "F": list(self.F), "G": list(self.G)}

    @classmethod
    def from_json(cls, data: dict) -> "RatMap":
        if "F" in data:
            F = [int(x) for x in data["F"]]
            G = [int(x) for x in data["G"]]
            if "d" in data and int(data["d"]) != len(F) - 1:
                raise ValueError("d does not match the coefficient count")
            return cls.normalized(F, G)
        if "num" in data:
            num = [as_fraction(x) for x in data["num"]]
            den = [as_fraction(x) for x in data["den"]]
            d = int(data.get("d", max(len(num), len(den)) - 1))
            return from_affine(num, den, d)
        raise ValueError("map JSON needs either F/G or num/den")

    def __str__(self) -> str:
        return f"RatMap(d={self.d}, F={list(self.F)}, G={list(self.G)})"


@dataclass(frozen=True)
class ReducedMap:
    """A map over ``F_p``: coefficients reduced into ``range(p)``."""

    p: int
    d: int
    F: tuple
    G: tuple


@dataclass(frozen=True)
class OrbitResult:
    tail: tuple
    cycle: tuple
    wandering: bool
    iterations: int

    @property
    def preperiodic(self) -> bool:
        return not self.wandering


def resultant_of_forms(F: Sequence[int], G: Sequence[int]) -> int:
    return poly.det_bareiss(poly.sylvester_matrix(F, G))


def from_affine(num: Sequence, den: Sequence, d: Optional[int] = None) -> RatMap:
    """Homogenize ``num(x)/den(x)`` (coefficients high-to-low) to degree ``d``.

    Rational coefficients are cleared by their common denominator.
    """
    num = [as_fraction(x) for x in num]
    den = [as_fraction(x) for x in den]
    if d is None:
        d = max(len(num), len(den)) - 1
    for coeffs in (num, den):
        while len(coeffs) > d + 1:
            if coeffs[0] != 0:
                raise ValueError("polynomial degree exceeds d")
            coeffs.pop(0)
    num = [Fraction(0)] * (d + 1 - len(num)) + num
    den = [Fraction(0)] * (d + 1 - len(den)) + den
    lcm = 1
    for c in num + den:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    F = [int(c * lcm) for c in num]
    G = [int(c * lcm) for c in den]
    if resultant_of_forms(F, G) == 0:
        raise ValueError("degenerate map: numerator and denominator share a root")
    return RatMap.normalized(F, G)


def resultant(f: RatMap) -> int:
    return resultant_of_forms(f.F, f.G)


def good_reduction_bad_primes(f: RatMap) -> tuple[int, ...]:
    return prime_support(resultant(f))


def evaluate(f: RatMap, point) -> ProjPoint:
    point = ProjPoint.from_value(point)
    return normalize_point(poly.form_eval(f.F, point.a, point.b), poly.form_eval(f.G, point.a, point.b))


def conjugate(f: RatMap, phi: Mobius) -> RatMap:
    """``phi^-1 o f o phi``."""
    A = (phi.m11, phi.m12)
    B = (phi.m21, phi.m22)
    F1 = poly.form_compose(f.F, A, B)
    G1 = poly.form_compose(f.G, A, B)
    # apply the adjugate of phi to (F1, G1)
    F2 = poly.form_sub(poly.form_scale(F1, phi.m22), poly.form_scale(G1, phi.m12))
    G2 = poly.form_sub(poly.form_scale(G1, phi.m11), poly.form_scale(F1, phi.m21))
    return RatMap.normalized(F2, G2)


def compose(f: RatMap, g: RatMap) -> RatMap:
    """``f o g``."""
    return RatMap.normalized(poly.form_compose(f.F, g.F, g.G), poly.form_compose(f.G, g.F, g.G))


def compose_mobius(psi: Mobius, f: RatMap) -> RatMap:
    """``psi o f``."""
    F = poly.form_add(poly.form_scale(f.F, psi.m11), poly.form_scale(f.G, psi.m12))
    G = poly.form_add(poly.form_scale(f.F, psi.m21), poly.form_scale(f.G, psi.m22))
    return RatMap.normalized(F, G)


def _bits(f: RatMap) -> int:
    return max(abs(c).bit_length() for c in f.F + f.G)


def iterate(f: RatMap, n: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> RatMap:
    """``f^n``; refuses compositions whose coefficient storage would exceed
    ``bit_budget`` bits."""
    if n < 1:
        raise ValueError("n must be positive")
    result = f
    for _ in range(n - 1):
        deg = result.d * f.d
        # crude upper bound on coefficient size of f o result
        est_bits = f.d * (_bits(result) + result.d.bit_length() + 1) + _bits(f) + f.d.bit_length() + 2
        if 2 * (deg + 1) * est_bits > bit_budget:
            raise BudgetExceededError(f"iterate would exceed {bit_budget} coefficient bits")
        result = compose(f, result)
    return result


def pullback_form(f: RatMap, point: ProjPoint) -> tuple:
    """Primitive form ``q_y F - q_x G`` whose roots are the preimages of ``point``."""
    h = poly.form_sub(poly.form_scale(f.F, point.b), poly.form_scale(f.G, point.a))
    return poly.primitive(h)


def ramification_index(f: RatMap, point) -> int:
    point = ProjPoint.from_value(point)
    h = pullback_form(f, evaluate(f, point))
    k, _ = poly.linear_multiplicity(h, point.a, point.b)
    return k


def _check_good(f: RatMap, p: int) -> None:
    if resultant(f) % p == 0:
        raise BadReductionError(f"bad reduction at {p}")


def reduce_map_mod_p(f: RatMap, p: int) -> ReducedMap:
    _check_good(f, p)
    return ReducedMap(p, f.d, tuple(c % p for c in f.F), tuple(c % p for c in f.G))


def ramification_index_mod_p(f: RatMap, point, p: int) -> int:
    """Ramification index of the reduction of ``f`` at the reduction of ``point``."""
    _check_good(f, p)
    point = ProjPoint.from_value(point)
    x, y = reduce_point_mod_p(point, p)
    qx = poly.form_eval(f.F, x, y) % p
    qy = poly.form_eval(f.G, x, y) % p
    h = tuple((qy * a - qx * b) % p for a, b in zip(f.F, f.G))
    k, _ = poly.linear_multiplicity(h, x, y, p)
    return k


def critical_divisor(f: RatMap) -> tuple:
    """Primitive Wronskian ``F_X G_Y - F_Y G_X`` (degree ``2d - 2``)."""
    w = poly.form_sub(
        poly.form_mul(poly.form_dX(f.F), poly.form_dY(f.G)),
        poly.form_mul(poly.form_dY(f.F), poly.form_dX(f.G)),
    )
    return poly.primitive(w)


def _affine_derivative(f: RatMap, x: Fraction) -> Fraction:
    n = poly.form_eval(f.F, x, 1)
    dn = poly.form_eval(poly.form_dX(f.F), x, 1)
    g = poly.form_eval(f.G, x, 1)
    dg = poly.form_eval(poly.form_dX(f.G), x, 1)
    if g == 0:
        raise ZeroDivisionError("image is at infinity")
    return Fraction(dn * g - n * dg) / (g * g)


def _chart_away_from(points: Iterable[ProjPoint]) -> Mobius:
    """First ``x -> (k x + 1) / x`` (k = 0, 1, ...) whose value at infinity avoids ``points``."""
    pts = set(points)
    k = 0
    while True:
        phi = Mobius.normalized(k, 1, 1, 0)
        if normalize_point(k, 1) not in pts:
            return phi
        k += 1


def cycle_of(f: RatMap, point: ProjPoint, n: int) -> list[ProjPoint]:
    pts = [point]
    for _ in range(n - 1):
        pts.append(evaluate(f, pts[-1]))
    if evaluate(f, pts[-1]) != point:
        raise ValueError(f"{point} is not periodic with period dividing {n}")
    return pts


def multiplier(f: RatMap, point, n: int = 1) -> Fraction:
    """Derivative of ``f^n`` at an ``n``-periodic point.

    Computed as the product of affine derivatives along the cycle, after
    conjugating infinity away from the cycle when needed.
    """
    point = ProjPoint.from_value(point)
    if n < 1:
        raise ValueError("period must be positive")
    pts = cycle_of(f, point, n)
    g = f
    if any(q.is_infinity for q in pts):
        phi = _chart_away_from(pts)
        g = conjugate(f, phi)
        inv = phi.inverse()
        pts = [inv(q) for q in pts]
    lam = Fraction(1)
    for q in pts:
        lam *= _affine_derivative(g, q.affine())
    return lam


def rational_fixed_points(f: RatMap) -> tuple[ProjPoint, ...]:
    # Y*F - X*G as a form of degree d + 1
    h = tuple(a - b for a, b in zip((0,) + f.F, f.G + (0,)))
    return make_point_set(normalize_point(a, b) for a, b in poly.rational_roots(h))


def rational_preimages(f: RatMap, point) -> tuple[ProjPoint, ...]:
    point = ProjPoint.from_value(point)
    h = pullback_form(f, point)
    return make_point_set(normalize_point(a, b) for a, b in poly.rational_roots(h))


def orbit(f: RatMap, point, max_iter: int = 100) -> OrbitResult:
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    point = ProjPoint.from_value(point)
    seq = [point]
    seen = {point: 0}
    for step in range(1, max_iter + 1):
        nxt = evaluate(f, seq[-1])
        if nxt in seen:
            j = seen[nxt]
            return OrbitResult(tuple(seq[:j]), tuple(seq[j:]), False, step)
        seen[nxt] = len(seq)
        seq.append(nxt)
    return OrbitResult(tuple(seq), (), True, max_iter)
