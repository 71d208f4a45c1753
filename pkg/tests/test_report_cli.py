import json
from fractions import Fraction
import subprocess
import sys

import pytest

from repdigits.bounds import Mode
from repdigits.cli import main, parse_args, parse_b_values, parse_real
from repdigits.enumeration import EquationSpec
from repdigits.report import emit_report, parse_report_json, suite_csv
from repdigits.solver import run_suite, solve


@pytest.fixture(scope="module")
def small_suite():
    return run_suite([2, 3], 7, Mode.SUM, pooling="per-b")


def test_parse_b_values():
    assert parse_b_values("2..5") == [2, 3, 4, 5]
    assert parse_b_values("7,3,3..4") == [3, 4, 7]
    with pytest.raises(ValueError):
        parse_b_values("5..2")


def test_parse_args_solve():
    cfg = parse_args(["solve", "--b", "2", "--g", "10", "--mode", "sum", "--out", "r.json", "--format", "json"])
    assert cfg.command == "solve" and cfg.b_values == [2] and cfg.modes == [Mode.SUM]
    assert cfg.output_path == "r.json"


def test_parse_args_suite_grid():
    cfg = parse_args(["suite", "--b", "2..12", "--g", "10", "--mode", "sum,diff", "--format", "csv"])
    assert cfg.b_values == list(range(2, 13)) and cfg.modes == [Mode.SUM, Mode.DIFF]
    assert cfg.output_format == "csv"


@pytest.mark.parametrize("argv", [
    ["solve", "--b", "1", "--g", "10"],
    ["solve", "--b", "2", "--g", "1"],
    ["solve", "--b", "2", "--bogus"],
    ["solve", "--b", "2", "--mode", "product"],
    ["reduce", "--tau", "sqrt(2)", "--mu", "0", "--A", "1", "--B", "1", "--M", "10"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        parse_args(argv)
    assert exc.value.code == 2


def test_parse_real_forms():
    assert parse_real("3/4").rational == Fraction(3, 4)
    assert parse_real("log(2)/log(10)").log_args is not None
    assert parse_real("sqrt(2)").rational is None
    x = parse_real("112/log(10)")(128)
    assert 48.6 < float(x.lo) < 48.7
    with pytest.raises(ValueError):
        parse_real("exp(2)")


def test_json_round_trip_and_big_integers():
    rep = solve(EquationSpec(5, 10, 1, 1, Mode.SUM))
    data = emit_report(rep, "json")
    assert parse_report_json(data) == rep
    doc = json.loads(data)
    assert doc["schema_version"] == 1
    assert isinstance(doc["step2"]["n_max"], str)
    assert all(isinstance(x, str) for s in doc["solutions"] for x in s)
    # byte-stable
    assert emit_report(rep, "json") == data


def test_empty_solution_list_serializes():
    rep = solve(EquationSpec(2, 3, 1, 1, Mode.DIFF))
    rep.solutions = []
    assert json.loads(emit_report(rep, "json"))["solutions"] == []


def test_suite_csv_layout(small_suite):
    data = suite_csv(small_suite)
    text = data.decode("ascii")
    assert "\r" not in text and '"' not in text
    lines = text.splitlines()
    assert lines[0] == "b,2,3"
    labels = [l.split(",")[0] for l in lines[1:]]
    assert labels == ["m-l<=", "n-2<=", "n_b", "ml_b", "N0", "N=", "l<=", "m<=", "n<="]
    for l in lines[1:]:
        assert all(c.lstrip("-").isdigit() for c in l.split(",")[1:])


def test_suite_formats(small_suite):
    assert json.loads(emit_report(small_suite, "json"))["mode"] == "sum"
    assert b"sum suite" in emit_report(small_suite, "text")
    with pytest.raises(ValueError):
        emit_report(small_suite, "xml")


def test_cli_solve_writes_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["solve", "--b", "3", "--g", "7", "--mode", "diff", "--base-sign", "+",
                 "--const-sign", "-", "--out", str(out), "--format", "json"]) == 0
    doc = json.loads(out.read_text())
    assert doc["spec"]["b"] == 3


def test_cli_reduce(capsys):
    assert main(["reduce", "--tau", "log(2)/log(10)", "--mu", "1/3", "--A", "2", "--B", "10", "--M", "1000"]) == 0
    assert "outcome:" in capsys.readouterr().out


def test_cli_bounds_and_families(capsys):
    assert main(["bounds", "--b", "12", "--g", "10", "--mode", "diff", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["bounds"][0]["lm_max"].startswith("143")
    assert main(["families", "--b", "2", "--g", "8", "--mode", "sum"]) == 0
    assert "kind A" in capsys.readouterr().out


def test_verify_quick_and_mutation():
    ok = subprocess.run([sys.executable, "-m", "repdigits", "verify", "--quick"], capture_output=True, text=True)
    assert ok.returncode == 0, ok.stdout + ok.stderr
    bad = subprocess.run([sys.executable, "-m", "repdigits", "verify", "--quick", "--inject-fault", "repunit"],
                         capture_output=True, text=True)
    assert bad.returncode != 0
    assert bad.stdout.startswith("FAIL oracle equivalence")
