"""Batch checks for the headline properties of the package.

Each ``check_*`` function runs one suite with a seeded random source and
returns a :class:`CheckResult`; :func:`run_all` runs them in order. The test
suite and the ``acceptance`` CLI command both use these.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .core_arith import is_s_unit, prime_support, solve_unit_equation
from .goodred import (
    Triple,
    enumerate_point_sets,
    star_stability_cofactor,
    star_unstable_primes_scan,
    triple_equivalence,
    verify_triple,
)
from .interp import NotUnique, constraints_from_map, search_triples, unique_map
from .milnor import (
    family_expected,
    family_resultant_of_model,
    fixed_multiplier_charpoly,
    get_family,
    index_identity_holds,
    instantiate_family,
    jacobian_independent,
    milnor_coordinates,
    random_admissible_params,
)
from .portrait import canonical_form, catalog, enumerate_preperiodic, weight
from .projective import Mobius, ProjPoint
from .ratmap import RatMap, conjugate, from_affine, resultant_of_forms

__all__ = ["CheckResult", "CHECKS", "run_all"]

MILNOR_REQUIRED = (
    "P2_3", "P2_4", "P3_1", "P3_2", "P3_4", "P3_5", "P3_7",
    "P4_4", "P4_6", "P4_8", "P4_11", "P4_20", "simple_d2",
)


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.title} ({self.seconds:.2f}s)"


def _timed(number: int, title: str, fn: Callable[[], tuple[bool, dict]]) -> CheckResult:
    start = time.perf_counter()
    ok, details = fn()
    return CheckResult(number, title, ok, time.perf_counter() - start, details)


def random_morphism(rng: random.Random, d: int, height: int = 9) -> RatMap:
    while True:
        F = [rng.randint(-height, height) for _ in range(d + 1)]
        G = [rng.randint(-height, height) for _ in range(d + 1)]
        if resultant_of_forms(F, G) != 0:
            return RatMap.normalized(F, G)


def random_mobius(rng: random.Random, height: int = 7) -> Mobius:
    while True:
        m = [rng.randint(-height, height) for _ in range(4)]
        if m[0] * m[3] - m[1] * m[2] != 0:
            return Mobius.normalized(*m)


def random_point(rng: random.Random, height: int = 9) -> ProjPoint:
    if rng.random() < 0.1:
        return ProjPoint(1, 0)
    return ProjPoint.from_value(Fraction(rng.randint(-height, height), rng.randint(1, height)))


# ------------------------------------------------------------ 1


def check_enumeration(seed: int = 0) -> CheckResult:
    def run():
        start = time.perf_counter()
        found = enumerate_preperiodic(2, 4)
        elapsed = time.perf_counter() - start
        counts = {w: sum(1 for p in found if weight(p) == w) for w in range(1, 5)}
        cat = {canonical_form(e.portrait) for e in catalog() if e.portrait.n > 0}
        same = {canonical_form(p) for p in found} == cat
        ok = counts == {1: 1, 2: 4, 3: 8, 4: 22} and same and len(cat) == 35 and elapsed < 5
        return ok, {"counts": counts, "matches_catalog": same, "catalog_size": len(cat), "seconds": elapsed}

    return _timed(1, "portrait enumeration 1/4/8/22 equals catalog", run)


# ------------------------------------------------------------ 2


def check_milnor_families(seed: int = 0, samples: int = 20) -> CheckResult:
    def run():
        rng = random.Random(seed)
        start = time.perf_counter()
        names = [n for n in _families_with_milnor()]
        missing = [n for n in MILNOR_REQUIRED if n not in names]
        failures = []
        for name in names:
            for _ in range(samples):
                params = random_admissible_params(name, rng)
                got = milnor_coordinates(instantiate_family(name, params))
                if got != family_expected(name, params)["milnor"]:
                    failures.append((name, {k: str(v) for k, v in params.items()}))
        independent = {}
        for name in names:
            fam = get_family(name)
            if len(fam.params) == 2:
                independent[name] = jacobian_independent(*fam.milnor)
        elapsed = time.perf_counter() - start
        ok = not failures and not missing and all(independent.values()) and elapsed < 10
        return ok, {
            "families": len(names),
            "failures": failures[:5],
            "missing": missing,
            "jacobian_independent": independent,
            "seconds": elapsed,
        }

    return _timed(2, "Milnor closed forms of the parametric families", run)


def _families_with_milnor() -> list[str]:
    from .milnor import family_names

    out = []
    for name in family_names():
        if name in ("fa", "fbold"):
            continue
        if get_family(name).milnor is not None:
            out.append(name)
    return out


# ------------------------------------------------------------ 3


def check_resultants(seed: int = 0, samples: int = 20) -> CheckResult:
    def run():
        rng = random.Random(seed)
        bad = []
        cases = [("fa", d) for d in (2, 3, 4)] + [("fbold", d) for d in (2, 3, 4)] + [("P2_3", None)]
        for name, d in cases:
            for _ in range(samples):
                params = random_admissible_params(name, rng, degree=d)
                got = family_resultant_of_model(name, params)
                exp = family_expected(name, params)
                want = exp["resultant"]
                match = abs(got) == abs(want) if exp["resultant_up_to_sign"] else got == want
                if not match:
                    bad.append((name, d, str(got), str(want)))
        return not bad, {"mismatches": bad[:5]}

    return _timed(3, "resultant closed forms", run)


# ------------------------------------------------------------ 4


def _random_s_unit(rng: random.Random, primes) -> Fraction:
    u = Fraction(rng.choice([-1, 1]))
    for p in primes:
        u *= Fraction(p) ** rng.randint(-8, 8)
    return u


def check_fa_end_to_end(seed: int = 0) -> CheckResult:
    def run():
        rng = random.Random(seed)
        details = {}
        ok = True
        for d in (2, 3):
            S = prime_support(math.factorial(2 * d - 2))
            X = list(range(d)) + [-j for j in range(1, d)] + ["inf"]
            sign = (-1) ** (d - 1)
            units = set()
            while len(units) < 10:
                # f_a and f_b with b = sign/a are conjugate by x -> -1/x; keep |a| >= 1
                u = _random_s_unit(rng, S)
                units.add(u if abs(u) > 1 else (sign / u if abs(u) < 1 else Fraction(1)))
            paired = 0
            milnors = []
            charpolys = []
            members = 0
            portraits_ok = True if d == 2 else None
            for a in sorted(units):
                f = instantiate_family("fa", {"d": d, "a": a})
                report = verify_triple(Triple.make(f, X, X), S)
                members += report.member and report.n == 2 * d
                if d == 2:
                    portraits_ok = portraits_ok and report.catalog_name == "P4_11"
                    milnors.append(milnor_coordinates(f))
                charpolys.append(fixed_multiplier_charpoly(f))
                partner = instantiate_family("fa", {"d": d, "a": sign / a})
                paired += triple_equivalence(Triple.make(f, X, X), Triple.make(partner, X, X), S) is not None
            distinct = len(set(charpolys)) == len(charpolys)
            if d == 2:
                distinct &= len(set(milnors)) == len(milnors)
            details[d] = {
                "S": S,
                "members": members,
                "portrait_P4_11": portraits_ok,
                "distinct": distinct,
                "partners_conjugate": paired,
            }
            ok &= members == 10 and portraits_ok is not False and distinct and paired == 10
        return ok, details

    return _timed(4, "weight-2d family triples have good reduction and distinct invariants", run)


# ------------------------------------------------------------ 5


def check_rigidity(seed: int = 0, trials: int = 200) -> CheckResult:
    def run():
        rng = random.Random(seed)
        start = time.perf_counter()
        failures = 0
        for i in range(trials):
            d = 2 if i % 2 == 0 else 3
            f = random_morphism(rng, d)
            pts: list[ProjPoint] = []
            total = 0
            while total < 2 * d + 1:
                P = random_point(rng)
                if P in pts:
                    continue
                pts.append(P)
                total = sum(c.k for c in constraints_from_map(f, pts))
            got = unique_map(d, constraints_from_map(f, pts), seed=i)
            if not (isinstance(got, RatMap) and got == f):
                failures += 1
        # weight 2d: the f_a family shares every constraint
        sharp = []
        for d in (2, 3):
            X = list(range(d)) + [-j for j in range(1, d)] + ["inf"]
            f = instantiate_family("fa", {"d": d, "a": 1})
            sharp.append(isinstance(unique_map(d, constraints_from_map(f, X)), NotUnique))
        elapsed = time.perf_counter() - start
        ok = failures == 0 and all(sharp) and elapsed < 30
        return ok, {"failures": failures, "not_unique_at_2d": sharp, "seconds": elapsed}

    return _timed(5, "interpolation rigidity at weight 2d+1, sharpness at 2d", run)


# ------------------------------------------------------------ 6


def check_star_certificate(seed: int = 0, trials: int = 100, limit: int = 200) -> CheckResult:
    def run():
        rng = random.Random(seed)
        mismatches = []
        beyond = 0
        jumps = 0
        for _ in range(trials):
            f = random_morphism(rng, 2)
            P = random_point(rng)
            c = star_stability_cofactor(f, P)
            res = resultant_of_forms(f.F, f.G)
            support = prime_support(c) if abs(c) > 1 else ()
            visible = tuple(p for p in support if p <= limit and res % p)
            beyond += len(visible) != len(support)
            scan = star_unstable_primes_scan(f, P, limit)
            jumps += bool(scan)
            if visible != scan:
                mismatches.append((f.to_json(), str(P), c, scan))
        return not mismatches, {
            "mismatches": mismatches[:5],
            "samples_with_jumps": jumps,
            "samples_with_support_outside_scan": beyond,
        }

    return _timed(6, "star cofactor support equals the primes where ramification jumps", run)


# ------------------------------------------------------------ 7


def check_conjugacy_invariants(seed: int = 0, conjugations: int = 500, identities: int = 1000) -> CheckResult:
    def run():
        rng = random.Random(seed)
        bad_conj = 0
        for i in range(conjugations):
            d = 2 if i % 2 == 0 else 3
            f = random_morphism(rng, d, height=5)
            g = conjugate(f, random_mobius(rng))
            if fixed_multiplier_charpoly(f) != fixed_multiplier_charpoly(g):
                bad_conj += 1
            elif d == 2 and milnor_coordinates(f) != milnor_coordinates(g):
                bad_conj += 1
        maps = [from_affine([1, 0, Fraction(1, 4)], [1], 2)]
        maps += [random_morphism(rng, 2) for _ in range(identities - 1)]
        bad_index = sum(1 for f in maps if not index_identity_holds(f))
        return bad_conj == 0 and bad_index == 0, {"conjugation_failures": bad_conj, "index_failures": bad_index}

    return _timed(7, "multiplier invariants under conjugation; index identity", run)


# ------------------------------------------------------------ 8


def _unit_equation_by_height(primes, height: int) -> set[Fraction]:
    """Search rationals ``u = a/b`` with ``|a|, b <= height`` directly."""
    found = set()
    for b in range(1, height + 1):
        if not is_s_unit(b, primes):
            continue
        for a in range(-height, height + 1):
            if a == 0 or math.gcd(a, b) != 1:
                continue
            u = Fraction(a, b)
            if is_s_unit(u, primes) and is_s_unit(1 - u, primes):
                found.add(u)
    return found


def _unit_equation_by_pairs(primes, bound: int) -> set[Fraction]:
    """Test ``u + v = 1`` over all pairs of signed S-units with small exponents."""
    units = set()
    for exps in itertools.product(range(-bound, bound + 1), repeat=len(primes)):
        mag = Fraction(1)
        for p, e in zip(primes, exps):
            mag *= Fraction(p) ** e
        units.update((mag, -mag))
    return {u for u in units for v in units if u + v == 1}


def check_unit_equation(seed: int = 0) -> CheckResult:
    def run():
        expected = {Fraction(2), Fraction(-1), Fraction(1, 2)}
        got = {}
        for bound in (5, 6):
            sols = solve_unit_equation([2], bound)
            got[bound] = {s.u for s in sols}
            if any(s.u + s.v != 1 for s in sols):
                return False, {"error": "u + v != 1"}
        by_height = _unit_equation_by_height([2], 2**5)
        by_pairs = _unit_equation_by_pairs([2], 6)
        classes = enumerate_point_sets(4, [2], 5)
        ok = (
            all(v == expected for v in got.values())
            and by_height == expected
            and by_pairs == expected
            and len(classes) == 1
        )
        return ok, {
            "solutions": sorted(str(u) for u in got[5]),
            "oracle_by_height": sorted(str(u) for u in by_height),
            "oracle_by_pairs": sorted(str(u) for u in by_pairs),
            "point_set_classes": [[str(p) for p in c] for c in classes],
        }

    return _timed(8, "S-unit equation for S={2} and 4-point sets", run)


# ------------------------------------------------------------ 9


def check_search(seed: int = 0) -> CheckResult:
    def run():
        start = time.perf_counter()
        first = search_triples(2, 5, [], 5)
        second = search_triples(2, 5, [], 5)
        parallel = search_triples(2, 5, [], 5, jobs=2)

        def key(rows):
            return [(t.to_json(), r.to_json()) for t, r in rows]

        deterministic = key(first) == key(second) == key(parallel)
        x2 = Triple.make(from_affine([1, 0, 0], [1], 2), [0, 1, "inf"])
        hits = [t for t, _ in first if triple_equivalence(t, x2, []) is not None]
        elapsed = time.perf_counter() - start
        ok = deterministic and bool(hits) and elapsed < 60
        return ok, {"results": len(first), "deterministic": deterministic, "contains_x2": bool(hits), "seconds": elapsed}

    return _timed(9, "search driver finds x^2 on {0,1,inf} deterministically", run)


CHECKS = {
    1: check_enumeration,
    2: check_milnor_families,
    3: check_resultants,
    4: check_fa_end_to_end,
    5: check_rigidity,
    6: check_star_certificate,
    7: check_conjugacy_invariants,
    8: check_unit_equation,
    9: check_search,
}


def run_all(seed: int = 0, only=None) -> list[CheckResult]:
    numbers = sorted(only) if only else sorted(CHECKS)
    return [CHECKS[n](seed) for n in numbers]
