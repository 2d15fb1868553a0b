"""Triples ``(f, Y, X)``: portrait extraction, good-reduction membership,
ramification flavors and small good-reduction point sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Optional

from . import poly
from .core_arith import is_s_unit, prime_set, solve_unit_equation
from .portrait import Portrait, match_catalog
from .projective import (
    INF,
    ONE,
    ZERO,
    Mobius,
    ProjPoint,
    cross_determinant,
    is_mobius_s_integral,
    three_point_mobius,
    make_point_set,
    point_from_json,
    set_bad_primes,
)
from .ratmap import (
    RatMap,
    conjugate,
    evaluate,
    good_reduction_bad_primes,
    pullback_form,
    ramification_index,
)

__all__ = [
    "FLAVORS",
    "ReductionReport",
    "Triple",
    "enumerate_point_sets",
    "extract_portrait",
    "star_stability_cofactor",
    "star_unstable_primes_scan",
    "triple_equivalence",
    "verify_flavor",
    "verify_triple",
]

FLAVORS = ("bullet", "circ", "star")


@dataclass(frozen=True)
class Triple:
    f: RatMap
    Y: tuple[ProjPoint, ...]
    X: tuple[ProjPoint, ...]

    @classmethod
    def make(cls, f: RatMap, Y: Iterable, X: Optional[Iterable] = None) -> "Triple":
        """``X`` defaults to ``Y`` together with its image."""
        Y = make_point_set(Y)
        if X is None:
            X = set(Y) | {evaluate(f, P) for P in Y}
        return cls(f, Y, make_point_set(X))

    def structural_errors(self) -> list[str]:
        errors = []
        if not set(self.Y) <= set(self.X):
            errors.append("Y is not contained in X")
        image = set(self.Y) | {evaluate(self.f, P) for P in self.Y}
        if image != set(self.X):
            errors.append("X differs from Y together with f(Y)")
        return errors

    def to_json(self) -> dict:
        return {
            "map": self.f.to_json(),
            "Y": [str(P) for P in self.Y],
            "X": [str(P) for P in self.X],
        }

    @classmethod
    def from_json(cls, data) -> "Triple":
        f = RatMap.from_json(data["map"])
        Y = [_parse_point(p) for p in data["Y"]]
        X = [_parse_point(p) for p in data["X"]] if "X" in data else None
        return cls.make(f, Y, X)


def _parse_point(p) -> ProjPoint:
    try:
        return point_from_json(p)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"only points of P^1(Q) are supported, got {p!r}") from exc


def extract_portrait(t: Triple) -> Portrait:
    """Portrait on the vertices ``X`` (in sorted order) with ``Y`` marked."""
    errors = t.structural_errors()
    if errors:
        raise ValueError("; ".join(errors))
    index = {P: i for i, P in enumerate(t.X)}
    edges = {index[P]: index[evaluate(t.f, P)] for P in t.Y}
    weights = {index[P]: ramification_index(t.f, P) for P in t.Y}
    return Portrait.build(len(t.X), edges, weights)


@dataclass
class ReductionReport:
    S: tuple[int, ...]
    n: Optional[int]
    map_bad_primes: tuple[int, ...]
    set_bad_primes: tuple[int, ...]
    portrait: Optional[Portrait]
    catalog_name: Optional[str]
    in_gr: bool
    in_gr_tilde: bool
    require_map_gr: bool
    errors: list[str] = field(default_factory=list)

    @property
    def member(self) -> bool:
        return self.in_gr if self.require_map_gr else self.in_gr_tilde

    def __bool__(self) -> bool:
        return self.member

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "n": self.n,
            "S": list(self.S),
            "map_bad_primes": list(self.map_bad_primes),
            "set_bad_primes": list(self.set_bad_primes),
            "in_gr": self.in_gr,
            "in_gr_tilde": self.in_gr_tilde,
            "portrait": self.portrait.to_json() if self.portrait else None,
            "catalog": self.catalog_name,
            "errors": list(self.errors),
        }


def verify_triple(t: Triple, S: Iterable[int] = (), require_map_gr: bool = True) -> ReductionReport:
    """Membership of ``t`` in GR_d^1[n](Q, S), with ``n`` the total
    ramification over ``Y``; with ``require_map_gr=False`` the map itself may
    have bad reduction."""
    S = prime_set(S)
    map_bad = good_reduction_bad_primes(t.f)
    errors = t.structural_errors()
    try:
        set_bad = set_bad_primes(t.X)
    except ValueError as exc:
        set_bad = ()
        errors.append(str(exc))
    portrait = None
    name = None
    n = None
    if not errors:
        portrait = extract_portrait(t)
        n = sum(e for _, e in portrait.weights)
        if t.f.d == 2:
            name = match_catalog(portrait)
    set_ok = set(set_bad) <= set(S)
    tilde = not errors and set_ok
    full = tilde and set(map_bad) <= set(S)
    return ReductionReport(S, n, map_bad, set_bad, portrait, name, full, tilde, require_map_gr, errors)


def star_stability_cofactor(f: RatMap, point) -> int:
    """``C(P)`` where the pullback form of ``f(P)`` factors as ``L_P^e * C``.

    At a prime of good reduction the ramification at ``P`` jumps exactly when
    the prime divides this integer.
    """
    P = ProjPoint.from_value(point)
    h = pullback_form(f, evaluate(f, P))
    _, cof = poly.linear_multiplicity(h, P.a, P.b)
    value = poly.form_eval(cof, P.a, P.b)
    if value == 0:
        raise ArithmeticError("cofactor vanishes at the point")
    return value


def star_unstable_primes_scan(f: RatMap, point, limit: int = 200) -> tuple[int, ...]:
    """Good primes ``p <= limit`` where the ramification at ``point`` grows mod p."""
    from .core_arith import primes_up_to
    from .ratmap import ramification_index_mod_p, resultant

    P = ProjPoint.from_value(point)
    e = ramification_index(f, P)
    res = resultant(f)
    return tuple(
        p for p in primes_up_to(limit) if res % p and ramification_index_mod_p(f, P, p) > e
    )


def _isomorphisms(src: Portrait, dst: Portrait):
    """Bijections ``src -> dst`` respecting marking and edges (weights ignored)."""
    if src.n != dst.n or len(src.edges) != len(dst.edges):
        return
    sphi, dphi = src.phi, dst.phi
    sin = [sum(1 for w in sphi if sphi[w] == v) for v in range(src.n)]
    din = [sum(1 for w in dphi if dphi[w] == v) for v in range(dst.n)]
    order = list(range(src.n))
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(v: int, img: int) -> bool:
        if (v in sphi) != (img in dphi) or sin[v] != din[img]:
            return False
        if v in sphi and sphi[v] == v and dphi[img] != img:
            return False
        if v in sphi and sphi[v] in mapping and mapping[sphi[v]] != dphi[img]:
            return False
        for w, u in mapping.items():
            if w in sphi and sphi[w] == v and dphi.get(u) != img:
                return False
        return True

    def extend(i: int):
        if i == len(order):
            if all(dphi[mapping[w]] == mapping[v] for w, v in sphi.items()):
                yield dict(mapping)
            return
        v = order[i]
        for img in range(dst.n):
            if img in used or not consistent(v, img):
                continue
            mapping[v] = img
            used.add(img)
            yield from extend(i + 1)
            del mapping[v]
            used.discard(img)

    yield from extend(0)


def verify_flavor(t: Triple, S: Iterable[int], target: Portrait, flavor: str, require_map_gr: bool = True) -> bool:
    """Whether ``t`` lies in GR[target]^flavor(Q, S).

    The shape of ``target`` (weights ignored) must match the extracted
    portrait; a mismatch is an error rather than a negative answer.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}")
    S = prime_set(S)
    report = verify_triple(t, S, require_map_gr)
    if report.portrait is None:
        raise ValueError("; ".join(report.errors))
    actual = report.portrait
    isos = list(_isomorphisms(actual, target))
    if not isos:
        raise ValueError("the triple's portrait does not have the shape of the target")
    if not report.member:
        return False
    have = actual.eps
    want = target.eps
    cof_ok = {}
    for iso in isos:
        ok = True
        for v, e in have.items():
            need = want[iso[v]]
            if flavor == "bullet":
                ok = e >= need
            else:
                ok = e == need
                if ok and flavor == "star":
                    if v not in cof_ok:
                        cof_ok[v] = is_s_unit(star_stability_cofactor(t.f, t.X[v]), S)
                    ok = cof_ok[v]
            if not ok:
                break
        if ok:
            return True
    return False


def triple_equivalence(t1: Triple, t2: Triple, S: Iterable[int] = ()) -> Optional[Mobius]:
    """A Moebius map ``phi`` with S-unit determinant taking ``t1`` to ``t2``,
    meaning ``t2 = (phi^-1 f1 phi, phi^-1(Y1), phi^-1(X1))``; None if there is none.

    Needs at least three points in ``X``; ``phi`` is pinned down by where
    three points of ``X2`` go.
    """
    S = prime_set(S)
    if len(t1.X) != len(t2.X) or len(t1.Y) != len(t2.Y) or t1.f.d != t2.f.d:
        return None
    if len(t2.X) < 3:
        raise ValueError("equivalence test needs at least three points in X")
    src = three_point_mobius(*t2.X[:3])
    for q in permutations(t1.X, 3):
        phi = three_point_mobius(*q).inverse().compose(src)
        if not is_mobius_s_integral(phi, S):
            continue
        if {phi(P) for P in t2.X} != set(t1.X) or {phi(P) for P in t2.Y} != set(t1.Y):
            continue
        if conjugate(t1.f, phi) == t2.f:
            return phi
    return None


# ------------------------------------------------------------ point sets

_S3 = (
    lambda x: x,
    lambda x: 1 - x,
    lambda x: 1 / x,
    lambda x: 1 / (1 - x),
    lambda x: x / (x - 1),
    lambda x: (x - 1) / x,
)


def _extra_key(extras) -> tuple:
    return tuple(sorted(extras))


def enumerate_point_sets(n: int, S: Iterable[int], bound: int) -> list[tuple[ProjPoint, ...]]:
    """Good-reduction sets of ``n`` points containing ``0, 1, inf``, with the
    extra points taken from unit-equation solutions of exponent at most
    ``bound``; one representative per orbit of the symmetries of
    ``{0, 1, inf}``."""
    if not 3 <= n <= 5:
        raise ValueError("point sets of size 3 to 5 only")
    S = prime_set(S)
    base = (ZERO, ONE, INF)
    if n == 3:
        return [make_point_set(base)]
    us = [sol.u for sol in solve_unit_equation(S, bound)]
    candidates = []
    if n == 4:
        candidates = [(u,) for u in us]
    else:
        for u1, u2 in combinations(us, 2):
            delta = cross_determinant(ProjPoint.from_value(u1), ProjPoint.from_value(u2))
            if is_s_unit(delta, S):
                candidates.append((u1, u2))
    reps = {}
    for extras in candidates:
        orbit = [_extra_key(g(u) for u in extras) for g in _S3]
        reps[max(orbit)] = True
    out = []
    for key in sorted(reps):
        pts = make_point_set(list(base) + [ProjPoint.from_value(u) for u in key])
        if not set(set_bad_primes(pts)) <= set(S):
            raise AssertionError("unit-equation point set has bad reduction")
        out.append(pts)
    return out
