"""Conjugacy invariants built from fixed-point multipliers, and the catalog of
parametric families used to test them."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Mapping, Optional, Sequence

from .core_arith import as_fraction
from .expr import Poly, RatFunc, parse
from .poly import form_dX, lagrange_interpolate, resultant as sylvester_resultant
from .projective import Mobius
from .ratmap import RatMap, conjugate, from_affine

__all__ = [
    "FamilyError",
    "MilnorPoint",
    "MultiplierCharpoly",
    "ParametricFamily",
    "family_expected",
    "family_names",
    "fixed_multiplier_charpoly",
    "get_family",
    "index_identity_holds",
    "instantiate_family",
    "jacobian_independent",
    "milnor_coordinates",
]


class FamilyError(ValueError):
    """Unknown family or inadmissible parameters."""


@dataclass(frozen=True)
class MultiplierCharpoly:
    """Monic ``prod (T - lambda_i)`` over the fixed points; ``coeffs`` high-to-low."""

    coeffs: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def elementary(self, k: int) -> Fraction:
        """The k-th elementary symmetric function of the multipliers."""
        return (-1) ** k * self.coeffs[k]

    def __call__(self, t) -> Fraction:
        acc = Fraction(0)
        for c in self.coeffs:
            acc = acc * t + c
        return acc

    def __str__(self) -> str:
        terms = []
        D = self.degree
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = D - i
            mono = "" if e == 0 else ("T" if e == 1 else f"T^{e}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(terms).replace("+ -", "- ")


@dataclass(frozen=True)
class MilnorPoint:
    s1: Fraction
    s2: Fraction


def _conjugation_candidates():
    k = 0
    while True:
        yield Mobius(1, k, 0, 1)  # x + k
        yield Mobius(0, 1, 1, k)  # 1/(x + k)
        k += 1


def _fixed_at_infinity(f: RatMap) -> bool:
    return f.G[0] == 0


def fixed_multiplier_charpoly(f: RatMap) -> MultiplierCharpoly:
    """Characteristic polynomial of the multipliers at all d+1 fixed points.

    Computed as a resultant in ``x`` with ``T`` specialized at d+2 integers,
    so irrational fixed points never have to be represented.
    """
    g = f
    if _fixed_at_infinity(g):
        for phi in _conjugation_candidates():
            # phi o f o phi^-1: infinity now stands for phi^-1(inf) in {inf, -k}
            g = conjugate(f, phi.inverse())
            if not _fixed_at_infinity(g):
                break
    d = g.d
    F, G = g.F, g.G
    # Phi(x) = F(x,1) - x G(x,1), exact degree d+1 since G[0] != 0
    fixed_poly = [a - b for a, b in zip((0,) + F, G + (0,))]
    # at a fixed point f'(x) = (F' - x G') / G
    dF = (0,) + form_dX(F)
    dG = form_dX(G) + (0,)
    numer = [a - b for a, b in zip(dF, dG)]
    denom = list(G)
    samples = list(range(d + 2))
    values = [
        sylvester_resultant(fixed_poly, [t * q - p for p, q in zip(numer, denom)])
        for t in samples
    ]
    low_to_high = lagrange_interpolate(samples, values)
    while low_to_high and low_to_high[-1] == 0:
        low_to_high.pop()
    if len(low_to_high) != d + 2:
        raise ArithmeticError("multiplier polynomial has unexpected degree")
    lead = low_to_high[-1]
    return MultiplierCharpoly(tuple(c / lead for c in reversed(low_to_high)))


def _require_quadratic(f: RatMap) -> MultiplierCharpoly:
    if f.d != 2:
        raise ValueError(f"Milnor coordinates need degree 2, got degree {f.d}")
    return fixed_multiplier_charpoly(f)


def milnor_coordinates(f: RatMap) -> MilnorPoint:
    m = _require_quadratic(f)
    return MilnorPoint(m.elementary(1), m.elementary(2))


def index_identity_holds(f: RatMap) -> bool:
    """Degree-2 self-check: the product of the three multipliers equals
    their sum minus 2."""
    m = _require_quadratic(f)
    return m.elementary(3) == m.elementary(1) - 2


def _random_point(rng: random.Random, names, height: int) -> dict[str, Fraction]:
    return {
        v: Fraction(rng.randint(-height, height), rng.randint(1, height)) for v in names
    }


def jacobian_independent(e1, e2, seed: int = 0, samples: int = 12) -> bool:
    """Whether two rational expressions in two parameters have a Jacobian
    determinant that is not identically zero.

    ``e1`` and ``e2`` may be strings or :class:`RatFunc` values. Random exact
    evaluation settles the nonzero case quickly; otherwise the expanded
    numerator of the Jacobian decides.
    """
    e1 = parse(e1) if isinstance(e1, str) else e1
    e2 = parse(e2) if isinstance(e2, str) else e2
    names = sorted(e1.variables() | e2.variables())
    if len(names) > 2:
        raise ValueError(f"expected at most two parameters, got {names}")
    if len(names) < 2:
        # pad so a one-variable pair is still a 2x2 question; the Jacobian is 0
        names = (names + ["_p0", "_p1"])[:2]
    a, b = names
    jac = e1.diff(a) * e2.diff(b) - e1.diff(b) * e2.diff(a)
    rng = random.Random(seed)
    poles = 0
    height = 8
    for _ in range(samples):
        point = _random_point(rng, names, height)
        height *= 2
        try:
            if jac.evaluate(point) != 0:
                return True
        except ZeroDivisionError:
            poles += 1
    if poles == samples:
        raise ArithmeticError("every sample point was a pole")
    return not jac.num.is_zero()


# ---------------------------------------------------------------- families


@dataclass(frozen=True)
class ParametricFamily:
    name: str
    params: tuple[str, ...]
    num: str
    den: str
    degree: int = 2
    resultant: Optional[str] = None
    resultant_up_to_sign: bool = False
    milnor: Optional[tuple[str, str]] = None
    printed_milnor: Optional[tuple[str, str]] = None
    portrait: Optional[str] = None
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "params": list(self.params),
            "num": self.num,
            "den": self.den,
            "degree": self.degree,
        }
        if self.resultant is not None:
            out["resultant"] = self.resultant
            out["resultant_up_to_sign"] = self.resultant_up_to_sign
        if self.milnor is not None:
            out["milnor"] = list(self.milnor)
        if self.printed_milnor is not None:
            out["printed_milnor"] = list(self.printed_milnor)
        if self.portrait:
            out["portrait"] = self.portrait
        if self.note:
            out["note"] = self.note
        return out


@lru_cache(maxsize=1)
def _catalog() -> dict[str, ParametricFamily]:
    text = resources.files("dynred").joinpath("data/families.json").read_text()
    raw = json.loads(text)
    out = {}
    for entry in raw["families"]:
        fam = ParametricFamily(
            name=entry["name"],
            params=tuple(entry["params"]),
            num=entry["num"],
            den=entry["den"],
            degree=entry.get("degree", 2),
            resultant=entry.get("resultant"),
            resultant_up_to_sign=entry.get("resultant_up_to_sign", False),
            milnor=tuple(entry["milnor"]) if "milnor" in entry else None,
            printed_milnor=tuple(entry["printed_milnor"]) if "printed_milnor" in entry else None,
            portrait=entry.get("portrait"),
            note=entry.get("note", ""),
        )
        out[fam.name] = fam
    return out


_BUILTIN = ("fa", "fbold")


def family_names() -> list[str]:
    return list(_BUILTIN) + sorted(_catalog())


def _builtin_family(name: str, params: Mapping[str, object]) -> ParametricFamily:
    if "d" not in params:
        raise FamilyError(f"family {name} needs the degree d")
    d = int(params["d"])
    if d < 2:
        raise FamilyError("degree must be at least 2")
    if name == "fa":
        num = "*".join(["a", "x"] + [f"(x-{i})" for i in range(1, d)])
        den = "*".join(f"(x+{j})" for j in range(1, d)) or "1"
        const = 1
        for i in range(d):
            for j in range(1, d):
                const *= i + j
        return ParametricFamily(
            name="fa",
            params=("a",),
            num=num,
            den=den,
            degree=d,
            resultant=f"{const}*a^{d}",
        )
    # fbold: (a0 x^d + ... + a_{d-2} x^2 + x + a_d) / x
    names = [f"a{i}" for i in range(d - 1)] + [f"a{d}"]
    terms = [f"a{i}*x^{d - i}" for i in range(d - 1)] + ["x", f"a{d}"]
    milnor = None
    if d == 2:
        quad = _catalog()["simple_d2"]
        milnor = tuple(
            s.replace("a", "a0").replace("b", "a2") for s in quad.milnor
        )
    return ParametricFamily(
        name="fbold",
        params=tuple(names),
        num=" + ".join(terms),
        den="x",
        degree=d,
        resultant=f"a0^{d - 1}*a{d}",
        # with our Sylvester convention the sign is (-1)^(d-1)
        resultant_up_to_sign=True,
        milnor=milnor,
    )


def get_family(name: str, params: Optional[Mapping[str, object]] = None) -> ParametricFamily:
    """Catalog entry; the built-in families need ``d`` in ``params``."""
    if name in _BUILTIN:
        return _builtin_family(name, params or {})
    try:
        return _catalog()[name]
    except KeyError:
        raise FamilyError(f"unknown family {name!r}") from None


def _param_values(fam: ParametricFamily, params: Mapping[str, object]) -> dict[str, Fraction]:
    missing = [p for p in fam.params if p not in params]
    if missing:
        raise FamilyError(f"family {fam.name} is missing parameters {missing}")
    return {p: as_fraction(params[p]) for p in fam.params}


def _affine_coeffs(expr: RatFunc, values: Mapping[str, Fraction]) -> tuple[list, list]:
    try:
        num = expr.num.substitute(values)
        den = expr.den.substitute(values)
        if den.is_zero():
            raise ZeroDivisionError
    except ZeroDivisionError:
        raise FamilyError("parameters hit a pole of the family") from None
    return num.coeffs_in("x"), den.coeffs_in("x")


def _instantiate_forms(fam: ParametricFamily, values) -> tuple[list, list]:
    """Unnormalized affine numerator/denominator with rational coefficients."""
    n_num, n_den = _affine_coeffs(parse(fam.num), values)
    d_num, d_den = _affine_coeffs(parse(fam.den), values)
    # (n_num / n_den) / (d_num / d_den)
    num = _mul_coeffs(n_num, d_den)
    den = _mul_coeffs(n_den, d_num)
    return _strip_to(num, fam.degree), _strip_to(den, fam.degree)


def _mul_coeffs(a: Sequence, b: Sequence) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _strip_to(c: list, d: int) -> list:
    c = list(c)
    while len(c) > d + 1:
        if c[0] != 0:
            raise FamilyError("instantiated map has degree above the family degree")
        c.pop(0)
    return [Fraction(0)] * (d + 1 - len(c)) + c


def _check_expected_denominators(fam: ParametricFamily, values) -> None:
    for text in (fam.milnor or ()) + ((fam.resultant,) if fam.resultant else ()):
        if parse(text).den.substitute(values).evaluate({}) == 0:
            raise FamilyError("parameters make a closed form undefined")


def instantiate_family(name: str, params: Mapping[str, object]) -> RatMap:
    """The normalized map of the named family at the given parameter values."""
    fam = get_family(name, params)
    values = _param_values(fam, params)
    _check_expected_denominators(fam, values)
    num, den = _instantiate_forms(fam, values)
    try:
        return from_affine(num, den, fam.degree)
    except ValueError as exc:
        raise FamilyError(f"inadmissible parameters: {exc}") from None


def family_resultant_of_model(name: str, params: Mapping[str, object]) -> Fraction:
    """Resultant of the family's printed model before clearing denominators."""
    fam = get_family(name, params)
    values = _param_values(fam, params)
    num, den = _instantiate_forms(fam, values)
    return Fraction(sylvester_resultant(num, den))


def family_expected(name: str, params: Optional[Mapping[str, object]] = None) -> dict:
    """Closed forms recorded for a family.

    Without parameter values the expressions are returned as strings;
    with them, as exact rationals under the keys ``resultant`` and ``milnor``.
    """
    fam = get_family(name, params)
    if params is None or (name in _BUILTIN and set(params) == {"d"}):
        out: dict = {"params": list(fam.params)}
        if fam.resultant is not None:
            out["resultant"] = fam.resultant
            out["resultant_up_to_sign"] = fam.resultant_up_to_sign
        if fam.milnor is not None:
            out["milnor"] = list(fam.milnor)
        return out
    values = _param_values(fam, params)
    out = {"params": list(fam.params)}
    try:
        if fam.resultant is not None:
            out["resultant"] = parse(fam.resultant).evaluate(values)
            out["resultant_up_to_sign"] = fam.resultant_up_to_sign
        if fam.milnor is not None:
            out["milnor"] = MilnorPoint(*(parse(s).evaluate(values) for s in fam.milnor))
    except ZeroDivisionError:
        raise FamilyError("parameters make a closed form undefined") from None
    return out


def random_admissible_params(
    name: str, rng: random.Random, height: int = 12, degree: Optional[int] = None, tries: int = 200
) -> dict[str, Fraction]:
    """Random rational parameters at which the family is a morphism of the
    stated degree and every recorded closed form is defined."""
    base = {"d": degree} if name in _BUILTIN else {}
    fam = get_family(name, base or None)
    for _ in range(tries):
        values = {
            p: Fraction(rng.choice([-1, 1]) * rng.randint(1, height), rng.randint(1, height))
            for p in fam.params
        }
        try:
            instantiate_family(name, {**base, **values})
            family_expected(name, {**base, **values})
        except FamilyError:
            continue
        return {**base, **values}
    raise FamilyError(f"no admissible parameters found for {name}")
