from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from dynred.core_arith import (
    factorize,
    format_rational,
    is_prime,
    is_s_unit,
    parse_rational,
    prime_set,
    prime_support,
    solve_unit_equation,
    valuation,
)


def test_format_and_parse_rationals():
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(-8, 4)) == "-2"
    assert parse_rational(" -3/6 ") == Fraction(-1, 2)
    with pytest.raises(ValueError):
        parse_rational("")


@given(st.integers(-10**12, 10**12).filter(lambda n: n != 0))
def test_factorize_matches_sympy(n):
    assert factorize(n) == sympy.factorint(abs(n))


def test_factorize_large_semiprime():
    p, q = 1000000007, 998244353
    assert factorize(p * q) == {q: 1, p: 1}


@given(st.integers(0, 5000))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


def test_valuation_examples():
    assert valuation(Fraction(24, 5), 2) == 3
    assert valuation(Fraction(3, 40), 2) == -3
    assert valuation(7, 2) == 0
    with pytest.raises(ValueError):
        valuation(0, 2)


def test_prime_support_and_units():
    assert prime_support(Fraction(-12, 35)) == (2, 3, 5, 7)
    assert prime_support(1) == ()
    assert is_s_unit(Fraction(-3, 8), [2, 3])
    assert not is_s_unit(Fraction(5, 8), [2, 3])
    assert not is_s_unit(0, [2])


def test_prime_set_rejects_composites():
    assert prime_set([3, 2, 3]) == (2, 3)
    with pytest.raises(ValueError):
        prime_set([4])


def test_unit_equation_for_two():
    sols = solve_unit_equation([2], 5)
    assert {(s.u, s.v) for s in sols} == {(Fraction(2), Fraction(-1)), (Fraction(-1), Fraction(2)), (Fraction(1, 2), Fraction(1, 2))}


def test_unit_equation_empty_prime_set():
    assert solve_unit_equation([], 3) == []


def _sympy_unit_oracle(primes, bound):
    """All u = a/b with a, b products of the primes up to the bound that leave 1 - u an S-unit."""
    found = set()
    mags = {sympy.Integer(1)}
    for p in primes:
        mags = {m * sympy.Integer(p) ** e for m in mags for e in range(-bound, bound + 1)}
    for m in mags:
        for u in (m, -m):
            v = 1 - u
            if v != 0 and set(sympy.factorint(abs(v.p))) | set(sympy.factorint(v.q)) <= set(primes):
                found.add(Fraction(int(u.p), int(u.q)))
    return found


@pytest.mark.parametrize("primes,bound", [([2], 6), ([3], 4), ([2, 3], 4), ([2, 5], 3)])
def test_unit_equation_matches_sympy_oracle(primes, bound):
    got = {s.u for s in solve_unit_equation(primes, bound)}
    assert got == _sympy_unit_oracle(primes, bound)
    assert all(s.u + s.v == 1 for s in solve_unit_equation(primes, bound))


def test_unit_equation_two_three_known_solutions():
    got = {s.u for s in solve_unit_equation([2, 3], 4)}
    for u in (Fraction(3), Fraction(4), Fraction(9), Fraction(-8), Fraction(1, 4), Fraction(4, 3)):
        assert u in got


@given(st.integers(1, 6), st.sampled_from([[2], [3], [2, 3]]))
def test_unit_equation_symmetric(bound, primes):
    us = {s.u for s in solve_unit_equation(primes, bound)}
    # u -> 1 - u is a symmetry of the equation; it may leave the exponent box
    for u in us:
        if 1 - u in us:
            assert is_s_unit(1 - u, primes)
    assert all(is_s_unit(u, primes) and is_s_unit(1 - u, primes) for u in us)
