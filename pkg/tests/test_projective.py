from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from conftest import mobius_maps, points
from dynred.projective import (
    INF,
    ONE,
    ZERO,
    Mobius,
    ProjPoint,
    cross_determinant,
    is_mobius_s_integral,
    make_point_set,
    normalize_point,
    point_from_json,
    point_to_json,
    reduce_point_mod_p,
    set_bad_primes,
    three_point_mobius,
)


def test_normalize_point():
    assert normalize_point(4, -6) == ProjPoint(-2, 3)
    assert normalize_point(-5, 0) == INF
    with pytest.raises(ValueError):
        normalize_point(0, 0)


def test_point_json_round_trip():
    assert point_from_json("inf") == INF
    assert point_from_json("1/2") == ProjPoint(1, 2)
    assert point_from_json(["3", "-6"]) == ProjPoint(-1, 2)
    assert point_to_json(ProjPoint(-1, 2)) == ["-1", "2"]
    with pytest.raises(ValueError):
        point_from_json(0.5)


@given(mobius_maps(), points)
def test_inverse_undoes_map(phi, P):
    assert phi.inverse()(phi(P)) == P


@given(mobius_maps(), mobius_maps(), points)
def test_compose_applies_right_first(phi, psi, P):
    assert phi.compose(psi)(P) == phi(psi(P))


@given(st.lists(points, min_size=3, max_size=3, unique=True))
def test_three_point_mobius_normalizes_to_standard_points(pts):
    phi = three_point_mobius(*pts)
    assert [phi(Q) for Q in pts] == [ZERO, ONE, INF]


def _bad_primes_bruteforce(pts, limit=200):
    from dynred.core_arith import is_prime

    bad = []
    for p in range(2, limit):
        if is_prime(p) and len({reduce_point_mod_p(P, p) for P in pts}) < len(pts):
            bad.append(p)
    return tuple(bad)


@given(st.lists(st.builds(Fraction, st.integers(-12, 12), st.integers(1, 6)).map(ProjPoint.from_value), min_size=2, max_size=4, unique=True))
def test_set_bad_primes_matches_reduction(pts):
    bad = set_bad_primes(pts)
    assert all(p < 200 for p in bad)
    assert bad == _bad_primes_bruteforce(pts)


def test_set_bad_primes_examples():
    assert set_bad_primes([ZERO, ONE, INF]) == ()
    assert set_bad_primes(make_point_set([0, 1, -1, "inf"])) == (2,)
    assert cross_determinant(ProjPoint(1, 2), ProjPoint(3, 1)) == 1 * 1 - 2 * 3


def test_s_integral_mobius():
    assert is_mobius_s_integral(Mobius.normalized(0, -1, 1, 0), [])
    assert not is_mobius_s_integral(Mobius.normalized(2, 0, 0, 1), [])
    assert is_mobius_s_integral(Mobius.normalized(2, 0, 0, 1), [2])


def test_mobius_json():
    phi = Mobius.normalized(2, 1, 1, 1)
    assert Mobius.from_json(phi.to_json()) == phi
