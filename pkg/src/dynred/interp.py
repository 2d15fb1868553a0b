"""Recovering a map from values and ramification, and the small-scale search
for triples with good reduction built on it.

A constraint ``(P, Q, k)`` asks for ``f(P) = Q`` with ramification at least
``k``: the form ``q_y F - q_x G`` must vanish to order ``k`` along a line
through ``P``. Each constraint contributes ``k`` homogeneous linear equations
in the ``2d + 2`` coefficients ``(F_0..F_d, G_0..G_d)``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from . import poly
from .core_arith import prime_set
from .goodred import ReductionReport, Triple, enumerate_point_sets, verify_triple
from .portrait import canonical_form
from .projective import ProjPoint
from .ratmap import RatMap, evaluate, ramification_index, resultant_of_forms

__all__ = [
    "NoMorphism",
    "NotUnique",
    "SolutionSpace",
    "ValueConstraint",
    "build_system",
    "constraints_from_map",
    "search_triples",
    "solve_nullspace",
    "unique_map",
]

_DIRECTIONS = ((1, 0), (0, 1), (1, 1))


class ValueConstraint(NamedTuple):
    P: ProjPoint
    Q: ProjPoint
    k: int

    @classmethod
    def make(cls, P, Q, k: int = 1) -> "ValueConstraint":
        if k < 1:
            raise ValueError("vanishing order must be at least 1")
        return cls(ProjPoint.from_value(P), ProjPoint.from_value(Q), int(k))


@dataclass(frozen=True)
class SolutionSpace:
    basis: tuple[tuple[int, ...], ...]
    ncols: int

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class NotUnique:
    basis: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class NoMorphism:
    reason: str = "no solution is a morphism"


def _direction(P: ProjPoint) -> tuple[int, int]:
    for u, v in _DIRECTIONS:
        if P.a * v - P.b * u != 0:
            return u, v
    raise AssertionError("unreachable: (1,0) and (0,1) cannot both be parallel")


def _line_coeffs(P: ProjPoint, d: int, k: int) -> list[list[int]]:
    """``c[i][j]``: coefficient of ``t^j`` in ``(a+tu)^(d-i) (b+tv)^i`` for ``j < k``."""
    u, v = _direction(P)
    a, b = P.a, P.b
    out = []
    for i in range(d + 1):
        xs = [comb(d - i, j) * a ** (d - i - j) * u**j for j in range(d - i + 1)]
        ys = [comb(i, j) * b ** (i - j) * v**j for j in range(i + 1)]
        prod = poly.form_mul(xs, ys)
        out.append([prod[j] if j < len(prod) else 0 for j in range(k)])
    return out


def build_system(d: int, constraints: Iterable[ValueConstraint]) -> list[list[int]]:
    """Integer matrix with one row per required vanishing coefficient and
    columns ``F_0..F_d, G_0..G_d``."""
    rows = []
    for P, Q, k in constraints:
        if k > d:
            raise ValueError(f"vanishing order {k} exceeds the degree {d}")
        c = _line_coeffs(P, d, k)
        for j in range(k):
            rows.append([Q.b * c[i][j] for i in range(d + 1)] + [-Q.a * c[i][j] for i in range(d + 1)])
    return rows


def _primitive_vector(vec: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in vec:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    return poly.primitive(ints)


def solve_nullspace(rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> SolutionSpace:
    """Exact kernel basis. Elimination is fraction-free; pivots are taken in
    the leftmost available column, from the lowest-index eligible row."""
    if ncols is None:
        if not rows:
            raise ValueError("column count needed for an empty system")
        ncols = len(rows[0])
    m = [list(map(int, r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][col]
        for i in range(len(m)):
            if i == r or m[i][col] == 0:
                continue
            f = m[i][col]
            m[i] = [piv * x - f * y for x, y in zip(m[i], m[r])]
            g = poly.content(m[i])
            if g > 1:
                m[i] = [x // g for x in m[i]]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row_i, pc in enumerate(pivots):
            vec[pc] = Fraction(-m[row_i][fc], m[row_i][pc])
        basis.append(_primitive_vector(vec))
    return SolutionSpace(tuple(basis), ncols)


def _split(vec: Sequence[int], d: int) -> tuple[tuple, tuple]:
    return tuple(vec[: d + 1]), tuple(vec[d + 1 :])


def unique_map(
    d: int, constraints: Iterable[ValueConstraint], seed: int = 0, trials: int = 24
) -> Union[RatMap, NotUnique, NoMorphism]:
    """The unique morphism meeting the constraints, if there is one.

    A solution space of dimension at least 2 is reported as ``NotUnique``
    when some member is a morphism (found by seeded random combinations);
    otherwise ``NoMorphism``.
    """
    constraints = list(constraints)
    space = solve_nullspace(build_system(d, constraints), 2 * d + 2)
    if space.dimension == 0:
        return NoMorphism("only the zero solution")
    if space.dimension == 1:
        F, G = _split(space.basis[0], d)
        if resultant_of_forms(F, G) == 0:
            return NoMorphism("the unique solution is degenerate")
        return RatMap.normalized(F, G)
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = [rng.randint(-10**6, 10**6) for _ in space.basis]
        vec = [sum(c * b[i] for c, b in zip(coeffs, space.basis)) for i in range(2 * d + 2)]
        if any(vec) and resultant_of_forms(*_split(vec, d)) != 0:
            return NotUnique(space.basis)
    return NoMorphism("every sampled solution is degenerate")


def constraints_from_map(f: RatMap, points: Iterable) -> list[ValueConstraint]:
    """Constraints ``(P, f(P), e_f(P))`` read off a known map."""
    out = []
    for P in points:
        P = ProjPoint.from_value(P)
        out.append(ValueConstraint(P, evaluate(f, P), ramification_index(f, P)))
    return out


# ------------------------------------------------------------ search


def _weight_vectors(size: int, n: int, d: int):
    for ws in itertools.product(range(1, d + 1), repeat=size):
        if sum(ws) == n:
            yield ws


def _search_point_set(args) -> list[tuple[tuple, Triple, ReductionReport]]:
    d, n, S, X, require_map_gr, x_index = args
    from .milnor import milnor_coordinates

    found = []
    size_lo = max(1, -(-n // d))
    for ysize in range(size_lo, len(X) + 1):
        for Y in itertools.combinations(X, ysize):
            for nu in itertools.product(range(len(X)), repeat=ysize):
                if set(Y) | {X[j] for j in nu} != set(X):
                    continue
                for ws in _weight_vectors(ysize, n, d):
                    incoming = [0] * len(X)
                    for j, w in zip(nu, ws):
                        incoming[j] += w
                    if max(incoming) > d:
                        continue
                    cons = [ValueConstraint(P, X[j], w) for P, j, w in zip(Y, nu, ws)]
                    f = unique_map(d, cons)
                    if not isinstance(f, RatMap):
                        continue
                    if any(ramification_index(f, P) != w for P, w in zip(Y, ws)):
                        continue
                    t = Triple.make(f, Y, X)
                    report = verify_triple(t, S, require_map_gr)
                    if not report.member:
                        continue
                    if d == 2:
                        m = milnor_coordinates(f)
                        tag = (str(m.s1), str(m.s2))
                    else:
                        tag = (str(f.F), str(f.G))
                    key = (canonical_form(report.portrait), tag)
                    found.append((key, t, report))
    return found


def search_triples(
    d: int,
    n: int,
    S: Iterable[int] = (),
    bound: int = 5,
    require_map_gr: bool = True,
    jobs: int = 1,
) -> list[tuple[Triple, ReductionReport]]:
    """Triples ``(f, Y, X)`` of total weight ``n`` with good reduction outside
    ``S``, one per (portrait, Milnor point) for ``d = 2`` or per normalized
    map otherwise.

    ``X`` runs over the representatives of :func:`enumerate_point_sets`, so
    completeness is relative to that list and to ``bound``.
    """
    if d < 2:
        raise ValueError("degree must be at least 2")
    if n < 1:
        raise ValueError("weight must be positive")
    S = prime_set(S)
    sizes = range(max(3, -(-n // d)), min(n, 5) + 1)
    tasks = []
    for size in sizes:
        for X in enumerate_point_sets(size, S, bound):
            tasks.append((d, n, S, X, require_map_gr, len(tasks)))
    if jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_search_point_set, tasks))
    else:
        chunks = [_search_point_set(t) for t in tasks]
    best: dict = {}
    for chunk in chunks:
        for key, t, report in chunk:
            best.setdefault(key, (t, report))
    return [best[k] for k in sorted(best)]
