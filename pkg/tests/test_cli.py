from __future__ import annotations

import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frescalc.cli import CommandRequest, Options, execute, main, run_batch
from frescalc.errors import ParseError
from frescalc.ncalg import NcElement
from frescalc.parser import BinOp, Gen, evaluate, parse_expression, parse_polynomial
from frescalc.poly import QPoly
from frescalc.reference import FOUR_VARIABLE_INPUT

A, B = NcElement.a(), NcElement.b()


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


@pytest.fixture
def gm_file(tmp_path):
    path = tmp_path / "four.json"
    path.write_text(json.dumps(FOUR_VARIABLE_INPUT))
    return str(path)


@pytest.fixture
def pres_file(tmp_path):
    path = tmp_path / "pres.json"
    path.write_text(json.dumps({"lambdas": ["2", "1"], "series": [["1", "1"]]}))
    return str(path)


def test_parse_commutator():
    tree = parse_expression("a*b - b*a")
    assert tree == BinOp("-", BinOp("*", Gen("a"), Gen("b")), BinOp("*", Gen("b"), Gen("a")))
    assert evaluate(tree) == B**2


def test_parse_product():
    assert evaluate(parse_expression("(a - 2*b)*(a - b)")) == A**2 - 3 * A * B + 4 * B**2


def test_dangling_operator():
    with pytest.raises(ParseError) as info:
        parse_expression("a*")
    assert info.value.position == 2
    assert "a" in info.value.expected


def test_left_associative_and_whitespace():
    assert evaluate(parse_expression(" a -b- b ")) == A - 2 * B
    assert evaluate(parse_expression("7 / 10 * a")) == Fraction(7, 10) * A


def test_exponent_must_be_uint():
    with pytest.raises(ParseError):
        parse_expression("a^b")


def test_polynomial_spellings():
    assert parse_polynomial("(xi + 1)^3*(x + 3/2)") == QPoly.from_roots([-1, -1, -1, Fraction(-3, 2)])
    assert parse_polynomial("ξ^2 - 1") == QPoly([-1, 0, 1])


monomials = st.tuples(st.integers(0, 4), st.integers(-3, 4))
coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=15)


@settings(max_examples=100, deadline=None)
@given(st.dictionaries(monomials, coeffs, max_size=6))
def test_render_parse_round_trip(terms):
    laurent = any(j < 0 for _, j in terms)
    x = NcElement(terms, laurent=laurent)
    assert evaluate(parse_expression(str(x)), laurent=laurent) == x


def test_normalize(capsys):
    assert run(["normalize", "b*a"], capsys) == (0, "a*b - b^2", "")


def test_normalize_parse_error(capsys):
    code, out, err = run(["normalize", "a*"], capsys)
    assert code == 2 and out == ""
    obj = json.loads(err)
    assert obj["error"] == "ParseError" and obj["position"] == 2


def test_normalize_from_stdin(capsys, monkeypatch):
    assert run(["normalize", "-"], capsys, "b*a\n", monkeypatch)[:2] == (0, "a*b - b^2")


def test_bpoly_and_belem(capsys):
    assert run(["bpoly", "(a - 2*b)*(a - b)"], capsys)[:2] == (0, "(x + 1)^2")
    assert run(["bpoly", "--factors", "2,1"], capsys)[:2] == (0, "(x + 1)^2")
    assert run(["belem", "--roots", "-1", "-1"], capsys)[:2] == (0, "a^2 - 3*a*b + 4*b^2")
    assert run(["belem", "(xi + 2)"], capsys)[:2] == (0, "a - 2*b")


def test_divide_and_exact_seq(capsys):
    code, out, _ = run(["divide", "(a - 3*b)*(a - 2*b)*(a - b)", "(a - 2*b)*(a - b)"], capsys)
    assert code == 0 and out.splitlines()[0] == "W = a - 3*b"
    code, _, err = run(["divide", "a^2", "a - b"], capsys)
    assert code == 3 and json.loads(err)["error"] == "NotDivisible"
    assert run(["exact-seq", "x + 2", "x + 1"], capsys)[:2] == (0, "(x + 1)^2")


def test_from_pi(capsys, pres_file):
    code, out, _ = run(["from-pi", pres_file], capsys)
    assert code == 0 and "B(x) = (x + 1)^2" in out and out.endswith("geometric")
    code, out, _ = run(["from-pi", "(a - 2*b)*S[1, -1]*(a - b)"], capsys)
    assert code == 0 and "P = a^2 - 3*a*b + 4*b^2" in out


def test_saturate(capsys, pres_file):
    code, out, _ = run(["saturate", pres_file, "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["char_poly"] == "(x + 1)^2"
    code, _, err = run(["saturate", pres_file, "--max-iter", "0"], capsys)
    assert code == 4 and json.loads(err)["error"] == "NotStabilized"


def test_gm(capsys, gm_file):
    code, out, _ = run(["gm", gm_file], capsys)
    assert code == 0
    assert "N = 12" in out
    assert "(x + 7/6)*(x + 4/3)" in out and "(x + 3)" in out


def test_poles(capsys, tmp_path):
    path = tmp_path / "led.json"
    path.write_text(json.dumps({
        "q": 1, "cap": 4, "xi_class": "-7/10",
        "family": {"0": [{"loc": "-7/10", "ord": 1, "exact": True}]},
        "check": {"lambdas": ["7/10"], "d": 1},
    }))
    code, out, _ = run(["poles", str(path), "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["check"] == {
        "holds": True, "witnesses": [1], "maximal": {"loc": "-7/10", "ord": 1, "h": 0}
    }


def test_missing_file_and_bad_json(capsys, tmp_path):
    code, _, err = run(["gm", str(tmp_path / "nope.json")], capsys)
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(["gm", str(bad)], capsys)
    assert code == 2 and json.loads(err)["error"] == "ParseError"


def test_option_bounds(capsys):
    assert run(["normalize", "a", "--precision", "0"], capsys)[0] == 2
    assert run(["normalize"], capsys)[0] == 2


def test_json_output_is_deterministic(gm_file):
    req = CommandRequest("gm", (gm_file,), Options(format="json"))
    first, second = execute(req), execute(req)
    assert first.text == second.text and first.exit_code == 0


def test_batch_keeps_input_order(gm_file, pres_file):
    outs = run_batch("gm", [gm_file, pres_file, gm_file], Options(format="json"))
    assert [o.exit_code for o in outs] == [0, 3, 0]
    assert outs[0].text == outs[2].text


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "frescalc", "normalize", "b*a"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "a*b - b^2"
