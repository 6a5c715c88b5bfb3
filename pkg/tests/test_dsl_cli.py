import io
import json
import math
import os
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from hgauss.cli import COMMANDS, run
from hgauss.dsl import parse, parse_file, print_workspace
from hgauss.groups import Class2Quotient
from hgauss.syntax import ParseError

SAMPLE = Path(__file__).parent / "data" / "sample.hga"


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call(*argv, "--json")
    assert code == 0, text
    return json.loads(text)


def test_catalogue_instantiation():
    ws = parse("algebra A = su_q2(q = 1/2);")
    assert ws.algebras["A"].params["q"] == Fraction(1, 2)
    assert not ws.warnings


def test_pipeline_binding():
    ws = parse("group F2 { gens g1, g2; rels; }\ngroup H = class2_quotient(F2);")
    h = ws.groups["H"]
    assert isinstance(h, Class2Quotient) and h.commutator_layer == "Z"


def test_unknown_reference_position():
    src = "algebra A = su_q2(q = 1/2);\ngaussian phi on Nope { drift a = 1; }"
    with pytest.raises(ParseError) as e:
        parse(src)
    msg = str(e.value)
    assert msg.startswith("2:17:") and "unknown reference" in msg


@pytest.mark.parametrize(
    "src, fragment",
    [
        ("blah", "expected one of"),
        ("algebra A = su_q2(q = 3);", "parameter out of range"),
        ("algebra A = su_q2(q = 1/2);\nalgebra A = su_q2(q = 1/3);", "duplicate"),
        ("algebra A = su_q2(q = 1/2)", "expected"),
        ("config degree = 0;", "degree"),
    ],
)
def test_parse_errors(src, fragment):
    with pytest.raises(ParseError) as e:
        parse(src)
    assert fragment in str(e.value)
    line, col = str(e.value).split(":")[:2]
    assert int(line) >= 1 and int(col) >= 1


def test_sample_round_trip():
    ws = parse_file(str(SAMPLE))
    text = print_workspace(ws)
    again = parse(text)
    assert print_workspace(again) == text
    for name, p in ws.algebras.items():
        q = again.algebras[name]
        assert (p.generators, p.relations, p.star_table, p.coproduct_table) == (
            q.generators,
            q.relations,
            q.star_table,
            q.coproduct_table,
        )
    for name, d in ws.gaussians.items():
        assert d.gram == again.gaussians[name].gram and d.drift == again.gaussians[name].drift
    assert ws.groups["T"].as_dict() == again.groups["T"].as_dict()


frac = st.fractions(min_value=-50, max_value=50, max_denominator=9)


@settings(max_examples=30, deadline=None)
@given(frac, frac, frac)
def test_gaussian_block_round_trip(re_, im, g):
    from hgauss.exact import Scalar, format_scalar

    src = (
        "algebra A = su_q2(q = 1/2);\n"
        f"gaussian phi on A {{ drift a = {format_scalar(Scalar(re_, im))}; gram (c, c) = {format_scalar(Scalar(g))}; }}"
    )
    ws = parse(src, probe=False)
    text = print_workspace(ws)
    assert print_workspace(parse(text, probe=False)) == text
    assert ws.gaussians["phi"].drift["a"] == Scalar(re_, im)


def test_spec_cli_solve():
    rep = call_json("solve", "--algebra", "su_q2:1/2")
    res = rep["result"]
    assert set(rep) == {"command", "inputs", "config", "result", "warnings"}
    assert res["dimension"] == 2
    assert set(res["forced_zero_eta"]) == {"c", "cs"} and set(res["forced_zero_drift"]) == {"c", "cs"}


def test_spec_cli_kinfty():
    rep = call_json("kinfty", "--algebra", "group:Z2", "--degree", "6", "--nmax", "6")
    assert rep["result"]["verdicts"] == ["total-disconnection evidence"]
    assert rep["result"]["chain"] == [1] * 6


def test_spec_cli_exp_state():
    rep = call_json("exp-state", "--functional", "heat", "--t", "1", "--word", "u^3", "--order", "30")
    re_, im = rep["result"]["value"]
    assert abs(re_ - math.exp(-4.5)) < 1e-9 and abs(im) < 1e-12


def test_json_is_deterministic():
    a = call("kn", "--algebra", "su_q2:1/2", "--degree", "3", "--n", "2", "--json")
    b = call("kn", "--algebra", "su_q2:1/2", "--degree", "3", "--n", "2", "--json")
    assert a == b and a[0] == 0


def test_workspace_file_commands():
    rep = call_json("wick", "--file", str(SAMPLE), "--algebra", "Z", "--functional", "heat", "--word", "u.u")
    assert rep["config"]["degree"] == 4
    code, text = call("class2", "--file", str(SAMPLE), "--group", "K")
    assert code == 0 and "Z2 x Z2" in text


@pytest.mark.parametrize(
    "argv, code",
    [
        (["solve"], 1),
        (["solve", "--algebra", "nonsense:3"], 1),
        (["kn", "--algebra", "group:Z2", "--n", "2", "--degree", "0"], 1),
        (["kn", "--algebra", "free:x,y,z", "--n", "2", "--degree", "12"], 2),
        (["kn", "--algebra", "free:x,y", "--n", "2", "--degree", "6", "--cap", "10"], 2),
        (["axioms", "--algebra", "o_n_plus:2"], 0),
    ],
)
def test_exit_codes(argv, code, capsys):
    before = os.environ.get("HGAUSS_MAX_BASIS")
    if code == 1 and argv == ["solve"]:
        with pytest.raises(SystemExit) as e:
            run(argv, out=io.StringIO())
        assert e.value.code == 1
    else:
        assert run(argv, out=io.StringIO()) == code
    assert os.environ.get("HGAUSS_MAX_BASIS") == before


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_every_subcommand_has_help(name, capsys):
    with pytest.raises(SystemExit) as e:
        run([name, "--help"])
    assert e.value.code == 0
    text = capsys.readouterr().out
    assert COMMANDS[name][1].split()[0] in text
    if "--degree" in text:
        assert "default: " in text


def test_every_subcommand_runs():
    cases = {
        "eval": ["--word", "u^2"],
        "wick": ["--word", "u.ui"],
        "check-gaussian": [],
        "check-drift": ["--functional", "rotation"],
        "check-classical": [],
        "solve": ["--algebra", "o_n_star:2"],
        "exp-state": ["--word", "u", "--t", "1/10"],
        "positivity": ["--t", "1/2"],
        "kn": ["--algebra", "group:Z2", "--n", "2", "--degree", "3"],
        "kinfty": ["--algebra", "group:Z", "--degree", "4", "--nmax", "4"],
        "membership": ["--algebra", "group:Z", "--n", "2", "--word", "u - 1"],
        "kac-gens": ["--algebra", "su_q2:1/2"],
        "scaling": ["--algebra", "su_q2:1/2", "--t", "0"],
        "filtration": ["--algebra", "group:F2", "--degree", "3", "--n", "2"],
        "o2plus-descent": ["--degree", "4", "--nmax", "4"],
        "class2": ["--group", "F2"],
        "torsion-free": ["--group", "Z x Z3"],
        "gaussian-part-dual": ["--group", "F2", "--central"],
        "axioms": ["--algebra", "group:Z2"],
    }
    assert set(cases) == set(COMMANDS)
    for name, extra in cases.items():
        code, text = call(name, *extra)
        assert code == 0, (name, text)
        assert text.startswith(f"{name}:")
