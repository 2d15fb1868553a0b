"""Command-line interface: JSON in, JSON out.

Exit codes: 0 for success or a positive verdict, 1 for a negative verdict,
2 for malformed input (with ``{"error": ...}`` on stdout).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import __version__
from .core_arith import format_rational, is_s_unit, prime_set, prime_support, solve_unit_equation
from .goodred import (
    FLAVORS,
    Triple,
    extract_portrait,
    star_stability_cofactor,
    star_unstable_primes_scan,
    verify_flavor,
    verify_triple,
)
from .interp import NoMorphism, NotUnique, ValueConstraint, search_triples, unique_map
from .milnor import (
    family_expected,
    family_names,
    fixed_multiplier_charpoly,
    get_family,
    instantiate_family,
    milnor_coordinates,
)
from .portrait import (
    Portrait,
    admissible,
    catalog,
    catalog_entry,
    catalog_version,
    enumerate_preperiodic,
    enumerate_preperiodic_bruteforce,
    exact_period_counts,
    match_catalog,
    weight,
)
from .projective import Mobius, point_from_json, point_to_json
from .ratmap import (
    DEFAULT_BIT_BUDGET,
    BadReductionError,
    RatMap,
    conjugate,
    evaluate,
    good_reduction_bad_primes,
    iterate,
    multiplier,
    ramification_index,
    ramification_index_mod_p,
    reduce_map_mod_p,
    resultant,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# ------------------------------------------------------------ input helpers


def _read_json(text: str) -> Any:
    """JSON given inline, as ``@path``, or ``-`` for stdin."""
    if text == "-":
        text = sys.stdin.read()
    elif text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def _loose_json(text: str) -> Any:
    """JSON if it parses, otherwise the raw string (so ``inf`` and ``1/2`` work)."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _map(text: str) -> RatMap:
    data = _read_json(text)
    if not isinstance(data, dict):
        raise InputError("map must be a JSON object")
    return RatMap.from_json(data)


def _point(text: str):
    return point_from_json(_loose_json(text))


def _primes(text: str) -> tuple[int, ...]:
    items = [s for s in text.replace(" ", "").split(",") if s]
    try:
        return prime_set(int(s) for s in items)
    except ValueError as exc:
        raise InputError(f"bad prime list {text!r}: {exc}") from None


def _params(text: Optional[str]) -> dict:
    out: dict = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise InputError(f"parameter {item!r} is not of the form name=value")
        k, v = item.split("=", 1)
        k = k.strip()
        out[k] = int(v) if k == "d" else Fraction(v.strip())
    return out


def _portrait_arg(text: str) -> Portrait:
    """Portrait JSON, or the name of a catalog entry."""
    data = _loose_json(text)
    if isinstance(data, str):
        return catalog_entry(data).portrait
    if text.startswith("@") or text == "-":
        data = _read_json(text)
    return Portrait.from_json(data)


# ------------------------------------------------------------ output


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj, args) -> None:
    if getattr(args, "output", "json") == "pretty":
        text = json.dumps(obj, sort_keys=True, indent=2, default=_jsonable)
    else:
        text = json.dumps(obj, sort_keys=True, default=_jsonable)
    print(text, flush=True)


def _q(x) -> str:
    return format_rational(x)


# ------------------------------------------------------------ commands


def cmd_resultant(args) -> int:
    f = _map(args.map)
    _emit({"resultant": str(resultant(f)), "bad_primes": list(good_reduction_bad_primes(f)), "map": f.to_json()}, args)
    return EXIT_OK


def cmd_eval(args) -> int:
    f = _map(args.map)
    if args.n > 1:
        f = iterate(f, args.n, args.budget)
    Q = evaluate(f, _point(args.point))
    _emit({"point": point_to_json(Q), "value": str(Q)}, args)
    return EXIT_OK


def cmd_conjugate(args) -> int:
    f = _map(args.map)
    phi = Mobius.from_json(_read_json(args.mobius))
    _emit(conjugate(f, phi).to_json(), args)
    return EXIT_OK


def cmd_ramify(args) -> int:
    f = _map(args.map)
    P = _point(args.point)
    out = {"point": str(P), "e": ramification_index(f, P)}
    if args.p is not None:
        try:
            out["e_mod_p"] = ramification_index_mod_p(f, P, args.p)
        except BadReductionError as exc:
            out["error"] = str(exc)
            _emit(out, args)
            return EXIT_NEGATIVE
        out["p"] = args.p
    _emit(out, args)
    return EXIT_OK


def cmd_multiplier(args) -> int:
    f = _map(args.map)
    P = _point(args.point)
    _emit({"point": str(P), "period": args.period, "multiplier": _q(multiplier(f, P, args.period))}, args)
    return EXIT_OK


def cmd_milnor(args) -> int:
    f = _map(args.map)
    if args.charpoly:
        m = fixed_multiplier_charpoly(f)
        _emit({"charpoly": [_q(c) for c in m.coeffs], "text": str(m)}, args)
        return EXIT_OK
    m = milnor_coordinates(f)
    _emit({"s1": _q(m.s1), "s2": _q(m.s2)}, args)
    return EXIT_OK


def cmd_family(args) -> int:
    if args.name is None:
        _emit({"families": family_names()}, args)
        return EXIT_OK
    params = _params(args.params)
    fam = get_family(args.name, params or None)
    out = {"family": fam.to_json()}
    if set(params) - {"d"}:
        out["map"] = instantiate_family(args.name, params).to_json()
        exp = family_expected(args.name, params)
        out["expected"] = {
            k: ({"s1": _q(v.s1), "s2": _q(v.s2)} if k == "milnor" else v) for k, v in exp.items()
        }
    _emit(out, args)
    return EXIT_OK


def _portrait_summary(p: Portrait, d: int) -> dict:
    ok, violated = admissible(p, d)
    return {
        "portrait": p.to_json(),
        "weight": weight(p),
        "catalog": match_catalog(p) if d == 2 else None,
        "exact_periods": {str(k): v for k, v in sorted(exact_period_counts(p).items())},
        "admissible": ok,
        "violated": violated,
    }


def cmd_portrait_extract(args) -> int:
    t = Triple.from_json(_read_json(args.triple))
    p = extract_portrait(t)
    out = _portrait_summary(p, t.f.d)
    out["X"] = [str(P) for P in t.X]
    _emit(out, args)
    return EXIT_OK


def cmd_portrait_enum(args) -> int:
    if args.method == "bruteforce":
        found = enumerate_preperiodic_bruteforce(args.d, args.max_weight, jobs=args.jobs)
    else:
        found = enumerate_preperiodic(args.d, args.max_weight)
    counts = {str(w): 0 for w in range(1, args.max_weight + 1)}
    for p in found:
        counts[str(weight(p))] += 1
    out: dict = {"counts": counts}
    if args.list:
        out["portraits"] = [
            {"portrait": p.to_json(), "weight": weight(p), "catalog": match_catalog(p) if args.d == 2 else None}
            for p in found
        ]
    _emit(out, args)
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.name:
        _emit(catalog_entry(args.name).to_json(), args)
    else:
        _emit({"version": catalog_version(), "entries": [e.to_json() for e in catalog()]}, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    t = Triple.from_json(_read_json(args.triple))
    report = verify_triple(t, args.primes, require_map_gr=not args.tilde)
    out = report.to_json()
    verdict = report.member
    if args.flavor or args.target:
        if not (args.flavor and args.target):
            raise InputError("--flavor and --target go together")
        target = _portrait_arg(args.target)
        verdict = verify_flavor(t, args.primes, target, args.flavor, require_map_gr=not args.tilde)
        out["flavor"] = args.flavor
        out["flavor_member"] = verdict
    _emit(out, args)
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_star_check(args) -> int:
    f = _map(args.map)
    P = _point(args.point)
    c = star_stability_cofactor(f, P)
    support = list(prime_support(c)) if abs(c) > 1 else []
    unit = is_s_unit(c, args.primes)
    out = {
        "point": str(P),
        "e": ramification_index(f, P),
        "cofactor": str(c),
        "support": support,
        "s_unit": unit,
    }
    if args.scan:
        out["scan"] = list(star_unstable_primes_scan(f, P, args.scan))
        out["scan_limit"] = args.scan
    _emit(out, args)
    return EXIT_OK if unit else EXIT_NEGATIVE


def cmd_unit_eq(args) -> int:
    sols = solve_unit_equation(args.primes, args.bound)
    _emit({"S": list(args.primes), "bound": args.bound, "solutions": [{"u": _q(s.u), "v": _q(s.v)} for s in sols]}, args)
    return EXIT_OK


def cmd_interp(args) -> int:
    data = _read_json(args.constraints)
    if not isinstance(data, list):
        raise InputError("constraints must be a JSON list")
    cons = []
    for item in data:
        if not isinstance(item, dict) or not {"P", "Q"} <= set(item):
            raise InputError(f"constraint needs P and Q: {item!r}")
        cons.append(ValueConstraint(point_from_json(item["P"]), point_from_json(item["Q"]), int(item.get("k", 1))))
    got = unique_map(args.d, cons, seed=args.seed)
    if isinstance(got, RatMap):
        _emit({"status": "unique", "map": got.to_json()}, args)
        return EXIT_OK
    if isinstance(got, NotUnique):
        _emit({"status": "not_unique", "dimension": len(got.basis), "basis": [list(b) for b in got.basis]}, args)
        return EXIT_NEGATIVE
    assert isinstance(got, NoMorphism)
    _emit({"status": "no_morphism", "reason": got.reason}, args)
    return EXIT_NEGATIVE


def cmd_search(args) -> int:
    rows = search_triples(args.d, args.n, args.primes, args.bound, require_map_gr=not args.tilde, jobs=args.jobs)
    for t, report in rows:
        # one JSON object per line
        print(json.dumps({"triple": t.to_json(), "report": report.to_json()}, sort_keys=True), flush=True)
    return EXIT_OK


def cmd_reduce(args) -> int:
    f = _map(args.map)
    try:
        r = reduce_map_mod_p(f, args.p)
    except BadReductionError as exc:
        _emit({"p": args.p, "good": False, "error": str(exc)}, args)
        return EXIT_NEGATIVE
    _emit({"p": r.p, "good": True, "d": r.d, "F": list(r.F), "G": list(r.G)}, args)
    return EXIT_OK


def cmd_acceptance(args) -> int:
    from .acceptance import run_all

    only = [int(s) for s in args.only.split(",")] if args.only else None
    results = run_all(args.seed, only)
    if args.output == "pretty":
        for r in results:
            print(r.line(), flush=True)
    else:
        _emit(
            {
                "seed": args.seed,
                "passed": all(r.passed for r in results),
                "criteria": [
                    {"number": r.number, "title": r.title, "passed": r.passed, "seconds": round(r.seconds, 3), "details": r.details}
                    for r in results
                ],
            },
            args,
        )
    return EXIT_OK if all(r.passed for r in results) else EXIT_NEGATIVE


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--primes", type=_primes, default=(), help='prime set S, e.g. "2,3"')
    common.add_argument("--bound", type=int, default=10, help="exponent bound for S-unit searches")
    common.add_argument("--budget", type=int, default=DEFAULT_BIT_BUDGET, help="coefficient-bit cap for iteration")
    common.add_argument("--output", choices=("json", "pretty"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)

    parser = _Parser(prog="dynred", description="Good reduction of rational maps on P^1 with marked points.")
    parser.add_argument("--version", action="version", version=f"dynred {__version__} (catalog {catalog_version()})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    p = add("resultant", cmd_resultant, "resultant and bad primes of a map")
    p.add_argument("--map", required=True)

    p = add("eval", cmd_eval, "image of a point")
    p.add_argument("--map", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--n", type=int, default=1, help="apply the n-th iterate")

    p = add("conjugate", cmd_conjugate, "phi^-1 o f o phi")
    p.add_argument("--map", required=True)
    p.add_argument("--mobius", required=True, help="[[m11,m12],[m21,m22]]")

    p = add("ramify", cmd_ramify, "ramification index, optionally mod p")
    p.add_argument("--map", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--p", type=int)

    p = add("multiplier", cmd_multiplier, "multiplier of a periodic point")
    p.add_argument("--map", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--period", type=int, default=1)

    p = add("milnor", cmd_milnor, "Milnor coordinates (d=2) or the multiplier polynomial")
    p.add_argument("--map", required=True)
    p.add_argument("--charpoly", action="store_true", help="print the fixed-point multiplier polynomial instead")

    p = add("family", cmd_family, "instantiate a parametric family")
    p.add_argument("name", nargs="?")
    p.add_argument("--params", help="e.g. a=1,b=2 (d=3 for the degree-d families)")

    p = add("portrait-extract", cmd_portrait_extract, "portrait of a triple")
    p.add_argument("--triple", required=True)

    p = add("portrait-enum", cmd_portrait_enum, "count admissible preperiodic portraits")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--max-weight", type=int, default=4)
    p.add_argument("--method", choices=("growth", "bruteforce"), default="growth")
    p.add_argument("--list", action="store_true", help="include the portraits")

    add("catalog", cmd_catalog, "the named degree-2 portrait catalog").add_argument("--name")

    p = add("verify", cmd_verify, "good-reduction membership of a triple")
    p.add_argument("--triple", required=True)
    p.add_argument("--tilde", action="store_true", help="do not require good reduction of the map")
    p.add_argument("--target", help="portrait JSON or catalog name")
    p.add_argument("--flavor", choices=FLAVORS)

    p = add("star-check", cmd_star_check, "stability cofactor of the ramification at a point")
    p.add_argument("--map", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--scan", type=int, default=0, help="also scan good primes up to this limit")

    add("unit-eq", cmd_unit_eq, "solutions of u + v = 1 in S-units")

    p = add("interp", cmd_interp, "the map meeting value and ramification constraints")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--constraints", required=True, help='[{"P": ..., "Q": ..., "k": 1}, ...]')

    p = add("search", cmd_search, "search small triples with good reduction (JSON lines)")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tilde", action="store_true")

    p = add("reduce", cmd_reduce, "reduction of a map mod p")
    p.add_argument("--map", required=True)
    p.add_argument("--p", type=int, required=True)

    p = add("acceptance", cmd_acceptance, "run the batch property checks")
    p.add_argument("--only", help="comma-separated criterion numbers")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "bound", 0) < 0:
            raise InputError("bound must be non-negative")
        if getattr(args, "jobs", 1) < 1:
            raise InputError("jobs must be positive")
        return args.func(args)
    except InputError as exc:
        msg = str(exc)
    except (ValueError, KeyError, TypeError, ArithmeticError, OSError) as exc:
        msg = f"{type(exc).__name__}: {exc}" if isinstance(exc, KeyError) else str(exc)
    print(json.dumps({"error": msg}, sort_keys=True), flush=True)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
