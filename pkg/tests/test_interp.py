import random

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from conftest import morphisms, points
from dynred.goodred import Triple, triple_equivalence, verify_triple
from dynred.interp import (
    NoMorphism,
    NotUnique,
    ValueConstraint,
    build_system,
    constraints_from_map,
    search_triples,
    solve_nullspace,
    unique_map,
)
from dynred.milnor import instantiate_family
from dynred.projective import INF, ZERO
from dynred.ratmap import RatMap, from_affine, ramification_index

SQUARE = from_affine([1, 0, 0], [1])


def C(P, Q, k=1):
    return ValueConstraint.make(P, Q, k)


def test_build_system_rows():
    # f(0) = 0 kills F_2; f(inf) = inf kills G_0
    assert build_system(2, [C(0, 0)]) == [[0, 0, 1, 0, 0, 0]]
    assert build_system(2, [C("inf", "inf")]) == [[0, 0, 0, -1, 0, 0]]
    # order 2 at 0 also kills F_1
    assert build_system(2, [C(0, 0, 2)]) == [[0, 0, 1, 0, 0, 0], [0, 1, 0, 0, 0, 0]]


def test_constraint_validation():
    with pytest.raises(ValueError):
        C(0, 0, 0)
    with pytest.raises(ValueError):
        build_system(2, [C(0, 0, 3)])


@given(st.integers(1, 5).flatmap(lambda r: st.lists(st.lists(st.integers(-6, 6), min_size=6, max_size=6), min_size=r, max_size=r)))
def test_nullspace_matches_sympy(rows):
    space = solve_nullspace(rows)
    M = sympy.Matrix(rows)
    assert space.dimension == len(M.nullspace())
    for v in space.basis:
        assert all(x == 0 for x in M * sympy.Matrix(v))
    if space.basis:
        assert sympy.Matrix([list(v) for v in space.basis]).rank() == space.dimension


def test_nullspace_examples():
    assert solve_nullspace([[1, 0], [0, 1]]).dimension == 0
    assert solve_nullspace([[1, 2], [2, 4]]).basis == ((-2, 1),) or solve_nullspace([[1, 2], [2, 4]]).basis == ((2, -1),)
    with pytest.raises(ValueError):
        solve_nullspace([])
    assert solve_nullspace([], 3).dimension == 3


def test_unique_map_examples():
    assert unique_map(2, [C(0, 0, 2), C("inf", "inf", 2), C(1, 1)]) == SQUARE
    assert unique_map(2, [C(0, 1, 2), C("inf", "inf", 2), C(1, 2)]) == from_affine([1, 0, 1], [1])
    got = unique_map(2, [C(0, 0, 2), C("inf", "inf", 2)])
    assert isinstance(got, NotUnique) and len(got.basis) == 2


def test_unique_map_no_morphism():
    # F vanishes to order 2 at 0 and at 1, so F = 0
    assert isinstance(unique_map(2, [C(0, 0, 2), C(1, 0, 2)]), NoMorphism)
    # f(0) = 0 and f(0) = 1 force a common root
    assert isinstance(unique_map(2, [C(0, 0), C(0, 1), C(1, 2), C(2, 3)]), NoMorphism)
    rng = random.Random(3)
    many = [C(i, rng.randint(-9, 9)) for i in range(7)]
    assert unique_map(2, many) == NoMorphism("only the zero solution")


@given(morphisms(), st.lists(points, min_size=7, max_size=9, unique=True))
def test_round_trip_recovers_map(f, pts):
    cons = []
    for P in pts:
        cons.extend(constraints_from_map(f, [P]))
        if sum(c.k for c in cons) >= 2 * f.d + 1:
            break
    assume(sum(c.k for c in cons) >= 2 * f.d + 1)
    assert unique_map(f.d, cons) == f


@pytest.mark.parametrize("d", [2, 3])
def test_weight_2d_is_not_rigid(d):
    X = list(range(d)) + [-j for j in range(1, d)] + ["inf"]
    f = instantiate_family("fa", {"d": d, "a": 1})
    cons = constraints_from_map(f, X)
    assert sum(c.k for c in cons) == 2 * d
    assert isinstance(unique_map(d, cons), NotUnique)


# ------------------------------------------------------------ search


def test_search_small_case():
    rows = search_triples(2, 5, [], 5)
    assert len(rows) == 4
    for t, r in rows:
        assert r.member and r.n == 5
        assert all(ramification_index(t.f, P) >= 1 for P in t.Y)
    target = Triple.make(SQUARE, [0, 1, "inf"])
    assert any(triple_equivalence(t, target, []) is not None for t, _ in rows)


def test_search_is_deterministic_across_jobs():
    a = search_triples(2, 5, [], 5)
    b = search_triples(2, 5, [], 5, jobs=2)
    assert [t.to_json() for t, _ in a] == [t.to_json() for t, _ in b]


def test_search_with_prime():
    rows = search_triples(2, 5, [2], 4)
    assert rows
    for t, r in rows:
        assert verify_triple(t, [2]).member and r.n == 5


def test_search_degree_three():
    rows = search_triples(3, 7, [], 5)
    assert rows
    for t, r in rows:
        assert t.f.d == 3 and r.member and r.n == 7


def test_search_rejects_bad_input():
    with pytest.raises(ValueError):
        search_triples(1, 3)
    with pytest.raises(ValueError):
        search_triples(2, 0)
