import json
import subprocess
import sys

import pytest

from dynred.cli import main

F3_TRIPLE = json.dumps({"map": {"num": [3, -3, 0], "den": [1, 1]}, "Y": ["0", "1", "-1", "inf"], "X": ["0", "1", "-1", "inf"]})
SQUARE = json.dumps({"num": [1, 0, 0], "den": [1]})


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_portrait_enum(capsys):
    code, out = run_json(capsys, "portrait-enum", "--d", "2", "--max-weight", "4")
    assert code == 0 and out == {"counts": {"1": 1, "2": 4, "3": 8, "4": 22}}


def test_portrait_enum_bruteforce_with_jobs(capsys):
    code, out = run_json(capsys, "portrait-enum", "--max-weight", "3", "--method", "bruteforce", "--jobs", "2", "--list")
    assert code == 0 and out["counts"] == {"1": 1, "2": 4, "3": 8}
    assert {p["catalog"] for p in out["portraits"]} >= {"P1_1", "P3_8"}


def test_milnor(capsys):
    code, out = run_json(capsys, "milnor", "--map", '{"num":[1,1],"den":[1,0,0]}')
    assert code == 0 and out == {"s1": "-5", "s2": "10"}
    code, out = run_json(capsys, "milnor", "--map", SQUARE, "--charpoly")
    assert out["charpoly"] == ["1", "-2", "0", "0"]


def test_milnor_needs_degree_two(capsys):
    code, out = run_json(capsys, "milnor", "--map", '{"num":[1,0,0,0],"den":[1]}')
    assert code == 2 and "error" in out


def test_verify_exit_codes(capsys):
    code, out = run_json(capsys, "verify", "--triple", F3_TRIPLE, "--primes", "2")
    assert code == 1 and out["member"] is False and out["catalog"] == "P4_11"
    code, out = run_json(capsys, "verify", "--triple", F3_TRIPLE, "--primes", "2", "--tilde")
    assert code == 0 and out["member"] is True
    code, out = run_json(capsys, "verify", "--triple", F3_TRIPLE, "--primes", "2,3")
    assert code == 0 and out["n"] == 4
    assert list(out) == sorted(out)


def test_verify_flavor(capsys):
    triple = json.dumps({"map": {"num": [1, 3, 0], "den": [1]}, "Y": ["0", "inf"]})
    code, out = run_json(capsys, "verify", "--triple", triple, "--target", "P3_8", "--flavor", "star")
    assert code == 1 and out["flavor_member"] is False
    code, out = run_json(capsys, "verify", "--triple", triple, "--target", "P3_8", "--flavor", "circ")
    assert code == 0
    code, out = run_json(capsys, "verify", "--triple", triple, "--flavor", "circ")
    assert code == 2


def test_resultant_eval_conjugate(capsys):
    code, out = run_json(capsys, "resultant", "--map", '{"num":[3,-3,0],"den":[1,1]}')
    assert out["resultant"] == "18" and out["bad_primes"] == [2, 3]
    code, out = run_json(capsys, "eval", "--map", SQUARE, "--point", "1/2")
    assert out == {"point": ["1", "4"], "value": "1/4"}
    code, out = run_json(capsys, "eval", "--map", SQUARE, "--point", "inf")
    assert out["value"] == "inf"
    code, out = run_json(capsys, "eval", "--map", '{"num":[1,0,1],"den":[1]}', "--point", "1", "--n", "3")
    assert out["value"] == "26"
    code, out = run_json(capsys, "conjugate", "--map", SQUARE, "--mobius", "[[0,1],[1,0]]")
    assert out == {"d": 2, "F": [1, 0, 0], "G": [0, 0, 1]}


def test_iteration_budget_is_an_input_error(capsys):
    code, out = run_json(capsys, "eval", "--map", '{"num":[7,0,5],"den":[3,0,1]}', "--point", "1", "--n", "12", "--budget", "1000")
    assert code == 2 and "bits" in out["error"]


def test_ramify_reduce_multiplier(capsys):
    m = '{"num":[1,6,0],"den":[1,1]}'
    code, out = run_json(capsys, "ramify", "--map", m, "--point", "0", "--p", "3")
    assert code == 0 and out["e"] == 1 and out["e_mod_p"] == 2
    code, out = run_json(capsys, "ramify", "--map", m, "--point", "0", "--p", "5")
    assert code == 1
    code, out = run_json(capsys, "reduce", "--map", m, "--p", "5")
    assert code == 1 and out["good"] is False
    code, out = run_json(capsys, "reduce", "--map", m, "--p", "7")
    assert code == 0 and out["F"] == [1, 6, 0]
    code, out = run_json(capsys, "multiplier", "--map", '{"num":[1,0,-1],"den":[1]}', "--point", "-1", "--period", "2")
    assert out["multiplier"] == "0"


def test_star_check(capsys):
    code, out = run_json(capsys, "star-check", "--map", '{"num":[1,6,0],"den":[1,1]}', "--point", "0", "--scan", "50")
    assert code == 1 and out["cofactor"] == "6" and out["scan"] == [2, 3]
    code, out = run_json(capsys, "star-check", "--map", '{"num":[1,6,0],"den":[1,1]}', "--point", "0", "--primes", "2,3")
    assert code == 0 and out["s_unit"] is True


def test_unit_eq(capsys):
    code, out = run_json(capsys, "unit-eq", "--primes", "2", "--bound", "5")
    assert {(s["u"], s["v"]) for s in out["solutions"]} == {("2", "-1"), ("-1", "2"), ("1/2", "1/2")}


def test_interp(capsys):
    cons = json.dumps([{"P": "0", "Q": "0", "k": 2}, {"P": "inf", "Q": "inf", "k": 2}, {"P": "1", "Q": "1"}])
    code, out = run_json(capsys, "interp", "--d", "2", "--constraints", cons)
    assert code == 0 and out == {"status": "unique", "map": {"d": 2, "F": [1, 0, 0], "G": [0, 0, 1]}}
    cons = json.dumps([{"P": ["0", "1"], "Q": "0", "k": 2}, {"P": "inf", "Q": "inf", "k": 2}])
    code, out = run_json(capsys, "interp", "--d", "2", "--constraints", cons)
    assert code == 1 and out["status"] == "not_unique" and out["dimension"] == 2
    code, out = run_json(capsys, "interp", "--d", "2", "--constraints", '[{"P": "0"}]')
    assert code == 2


def test_family_and_catalog(capsys):
    code, out = run_json(capsys, "family", "P2_3", "--params", "b=2,c=3")
    assert out["map"] == {"d": 2, "F": [1, 2, 0], "G": [0, 3, 1]}
    assert out["expected"]["resultant"] == "-5"
    code, out = run_json(capsys, "family", "fa", "--params", "d=3,a=2")
    assert out["expected"]["resultant"] == "1152"
    code, out = run_json(capsys, "family")
    assert "simple_d2" in out["families"]
    code, out = run_json(capsys, "family", "nope")
    assert code == 2
    code, out = run_json(capsys, "catalog")
    assert out["version"] == "1.0" and len(out["entries"]) == 36
    code, out = run_json(capsys, "catalog", "--name", "P4_11")
    assert out["MD"] == 2 and out["weight"] == 4


def test_portrait_extract(capsys):
    code, out = run_json(capsys, "portrait-extract", "--triple", F3_TRIPLE)
    assert code == 0 and out["catalog"] == "P4_11" and out["admissible"] is True


def test_search_streams_json_lines(capsys):
    code, out = run(capsys, "search", "--d", "2", "--n", "5", "--bound", "5")
    lines = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(lines) == 4
    assert all(line["report"]["member"] for line in lines)


@pytest.mark.parametrize(
    "argv",
    [
        ["milnor", "--map", "{not json"],
        ["milnor", "--map", "[1, 2]"],
        ["milnor", "--map", '{"F": [1, 1], "G": [1, 1]}'],
        ["unit-eq", "--primes", "4"],
        ["unit-eq", "--primes", "2", "--bound", "-1"],
        ["eval", "--map", SQUARE, "--point", "1.5"],
        ["eval", "--map", SQUARE, "--point", "sqrt2"],
        ["bogus"],
        [],
        ["catalog", "--name", "P9_9"],
        ["verify", "--triple", '{"map": {"num": [1, 0, 0], "den": [1]}, "Y": ["0"], "X": ["0", "1"]}', "--target", "P1_1", "--flavor", "circ"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, out = run_json(capsys, *argv)
    assert code == 2 and set(out) == {"error"}


def test_pretty_output_and_determinism(capsys):
    code, a = run(capsys, "verify", "--triple", F3_TRIPLE, "--primes", "2,3", "--output", "pretty")
    code, b = run(capsys, "verify", "--triple", F3_TRIPLE, "--primes", "2,3", "--output", "pretty")
    assert a == b and a.startswith("{\n")


def test_module_entry_point_and_version():
    out = subprocess.run([sys.executable, "-m", "dynred", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "catalog 1.0" in out.stdout
    out = subprocess.run([sys.executable, "-m", "dynred", "unit-eq", "--primes", "x"], capture_output=True, text=True)
    assert out.returncode == 2 and json.loads(out.stdout)["error"]


def test_acceptance_command(capsys):
    code, out = run_json(capsys, "acceptance", "--only", "1,8")
    assert code == 0 and out["passed"] and [c["number"] for c in out["criteria"]] == [1, 8]
