import random
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import assume, given, strategies as st

from conftest import mobius_maps, morphisms, rationals
from dynred.expr import parse
from dynred.milnor import (
    FamilyError,
    MilnorPoint,
    family_expected,
    family_names,
    family_resultant_of_model,
    fixed_multiplier_charpoly,
    get_family,
    index_identity_holds,
    instantiate_family,
    jacobian_independent,
    milnor_coordinates,
    random_admissible_params,
)
from dynred.ratmap import conjugate, from_affine

mpmath.mp.dps = 60


def _numeric_charpoly(f):
    """Monic polynomial of the fixed-point multipliers from numerical roots."""
    F = [mpmath.mpf(c) for c in f.F]
    G = [mpmath.mpf(c) for c in f.G]
    phi = [a - b for a, b in zip([0] + F, G + [0])]
    roots = mpmath.polyroots(phi, maxsteps=400, extraprec=400)

    def val(c, t):
        return mpmath.polyval(c, t)

    dF = [c * (len(F) - 1 - i) for i, c in enumerate(F[:-1])]
    dG = [c * (len(G) - 1 - i) for i, c in enumerate(G[:-1])]
    lams = [(val(dF, r) * val(G, r) - val(F, r) * val(dG, r)) / val(G, r) ** 2 for r in roots]
    coeffs = [mpmath.mpc(1)]
    for lam in lams:
        coeffs = [a - lam * b for a, b in zip(coeffs + [0], [0] + coeffs)]
    return coeffs


@given(morphisms(height=6))
def test_charpoly_matches_numerical_multipliers(f):
    # infinity not fixed and simple fixed points keep the numerical side well conditioned
    assume(f.G[0] != 0)
    phi = [a - b for a, b in zip((0,) + f.F, f.G + (0,))]
    assume(sympy.discriminant(sympy.Poly(phi, sympy.Symbol("x"))) != 0)
    exact = fixed_multiplier_charpoly(f).coeffs
    approx = _numeric_charpoly(f)
    for e, a in zip(exact, approx):
        assert abs(mpmath.mpf(e.numerator) / e.denominator - a) < mpmath.mpf(10) ** -25 * (1 + abs(a))


def test_charpoly_examples():
    assert str(fixed_multiplier_charpoly(from_affine([1, 0, 0], [1]))) == "T^3 - 2*T^2"
    assert fixed_multiplier_charpoly(from_affine([1], [1, 0, 0])).coeffs == (1, 6, 12, 8)
    fa = instantiate_family("fa", {"d": 2, "a": 7})
    assert fixed_multiplier_charpoly(fa)(-7) == 0
    m = fixed_multiplier_charpoly(from_affine([1, 1], [1, 0, 0]))
    assert m.coeffs == (1, 5, 10, 7)


def test_milnor_examples():
    assert milnor_coordinates(from_affine([1, 1], [1, 0, 0])) == MilnorPoint(-5, 10)
    assert milnor_coordinates(from_affine([3, -3, 0], [1])) == MilnorPoint(2, -15)
    assert milnor_coordinates(from_affine([1, 0, 0], [1])) == MilnorPoint(2, 0)
    with pytest.raises(ValueError):
        milnor_coordinates(from_affine([1, 0, 0, 0], [1]))


@given(morphisms(), mobius_maps())
def test_charpoly_is_conjugation_invariant(f, phi):
    assert fixed_multiplier_charpoly(conjugate(f, phi)) == fixed_multiplier_charpoly(f)


@given(morphisms(degree=2))
def test_index_identity(f):
    assert index_identity_holds(f)


def test_index_identity_double_fixed_point():
    assert index_identity_holds(from_affine([1, 0, Fraction(1, 4)], [1]))


def test_charpoly_degree_and_monic():
    f = from_affine([1, 0, 0, 0, 2], [3, 0, 1])
    m = fixed_multiplier_charpoly(f)
    assert m.degree == 5 and m.coeffs[0] == 1


# ------------------------------------------------------------ families


def test_family_catalog_contents():
    names = family_names()
    for required in ("P2_3", "P2_4", "P3_1", "P3_2", "P3_4", "P3_5", "P3_7", "P4_4", "P4_6", "P4_8", "P4_11", "P4_20", "simple_d2"):
        assert required in names
        assert get_family(required).milnor is not None


def test_family_instances():
    assert instantiate_family("P2_3", {"b": 2, "c": 3}).to_json() == {"d": 2, "F": [1, 2, 0], "G": [0, 3, 1]}
    f = instantiate_family("fa", {"d": 3, "a": 2})
    assert (f.F, f.G) == ((2, -6, 4, 0), (0, 1, 3, 2))
    assert family_resultant_of_model("fa", {"d": 3, "a": 2}) == 1152
    assert milnor_coordinates(instantiate_family("P4_8", {"b": 1})) == MilnorPoint(-5, 10)


def test_family_errors():
    with pytest.raises(FamilyError):
        get_family("P9_9")
    with pytest.raises(FamilyError):
        instantiate_family("P2_3", {"b": 1, "c": 1})
    with pytest.raises(FamilyError):
        instantiate_family("fa", {"a": 1})


@pytest.mark.parametrize("name", [n for n in family_names() if n not in ("fa", "fbold")])
def test_family_closed_forms(name):
    rng = random.Random(name)
    fam = get_family(name)
    for _ in range(5):
        params = random_admissible_params(name, rng)
        exp = family_expected(name, params)
        if fam.milnor is not None:
            assert milnor_coordinates(instantiate_family(name, params)) == exp["milnor"]
        if fam.resultant is not None:
            got = family_resultant_of_model(name, params)
            assert abs(got) == abs(exp["resultant"]) if exp["resultant_up_to_sign"] else got == exp["resultant"]


@pytest.mark.parametrize("d", [2, 3, 4])
def test_degree_d_family_resultants(d):
    rng = random.Random(d)
    for name in ("fa", "fbold"):
        params = random_admissible_params(name, rng, degree=d)
        got = family_resultant_of_model(name, params)
        want = family_expected(name, params)["resultant"]
        assert abs(got) == abs(want)


def test_fbold_resultant_sign():
    for d in (2, 3, 4, 5):
        params = {"d": d, **{f"a{i}": Fraction(i + 2) for i in range(d + 1)}}
        got = family_resultant_of_model("fbold", params)
        assert got == (-1) ** d * family_expected("fbold", params)["resultant"]


def test_jacobian_independence():
    assert jacobian_independent(*get_family("simple_d2").milnor)
    assert jacobian_independent("a + b", "a*b")
    assert not jacobian_independent("a + b", "(a + b)^2")
    assert not jacobian_independent("a/b", "b/a")


# ------------------------------------------------------------ expressions


@given(st.integers(-4, 4), st.integers(-4, 4), rationals, rationals)
def test_parse_matches_sympy(i, j, a, b):
    text = f"(a^2 - {i}*a*b + {j})/(b^2 + 1) - 3*a^-1 + (a - b)^3/2"
    assume(a != 0)
    got = parse(text).evaluate({"a": a, "b": b})
    sa, sb = sympy.symbols("a b")
    want = sympy.sympify(text.replace("^", "**")).subs({sa: sympy.Rational(a.numerator, a.denominator), sb: sympy.Rational(b.numerator, b.denominator)})
    assert got == Fraction(int(sympy.fraction(want)[0]), int(sympy.fraction(want)[1]))


def test_parse_rejects_unsupported_syntax():
    with pytest.raises(ValueError):
        parse("sqrt(a)")
    with pytest.raises(ValueError):
        parse("a**b")
