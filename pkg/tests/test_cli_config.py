import io
import json
import subprocess
import sys

import pytest

from hahntrunc import config
from hahntrunc.cli import main, parse_assignment
from hahntrunc.errors import ParseError, UsageError
from hahntrunc.logic.arithmetic import DIVISIBILITY


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture(autouse=True)
def no_config_file(monkeypatch):
    monkeypatch.delenv(config.ENV_VAR, raising=False)


# -- series ------------------------------------------------------------------

def test_series_mul():
    assert run("series", "mul", "1+t", "1-t") == (0, "1 - t^(2)\n")


def test_series_ops():
    assert run("series", "add", "t", "t")[1] == "2*t^(1)\n"
    assert run("series", "truncate", "t^(-1) + 1 + t", "0")[1] == "t^(-1)\n"
    assert run("series", "val", "0")[1] == "inf\n"
    assert run("series", "val", "t^(1/2) + t")[1] == "1/2\n"
    code, out = run("series", "decompose", "t^(-1) + 2 + t")
    assert code == 0 and out.splitlines() == [
        "purely infinite: t^(-1)", "constant: 2", "infinitesimal: t^(1)"]


def test_series_json():
    code, out = run("series", "parse", "3*t^(-2) + 1/2", "--json")
    assert code == 0
    assert json.loads(out) == {"terms": [{"exp": "-2", "coeff": "3"}, {"exp": "0", "coeff": "1/2"}]}


def test_series_over_other_algebras():
    assert run("series", "mul", "t^((0,1))", "t^((1,0))", "--group", "lex2")[1] == "t^((1,1))\n"
    assert run("series", "add", "4*t", "4*t", "--group", "int", "--field", "fp", "--modulus", "7")[1] \
        == "t^(1)\n"


def test_series_errors(capsys):
    assert run("series", "mul", "1+t")[0] == 2
    assert run("series", "parse", "1 + * t")[0] == 2
    assert "^" in capsys.readouterr().err
    assert run("series", "parse", "t^(1/2)", "--group", "int")[0] == 2
    assert run("series", "bogus", "t")[0] == 2
    assert run("--no-such-flag")[0] == 2


# -- mso ---------------------------------------------------------------------

def test_mso_eval_from_file(tmp_path):
    path = tmp_path / "div.mso"
    path.write_text(DIVISIBILITY + "\n")
    base = ("mso", "eval", "--bound", "64", "--strategy", "lfp", "--formula", str(path))
    assert run(*base, "--assign", "m=3,n=7") == (0, "false\n")
    assert run(*base, "--assign", "m=3,n=6") == (0, "true\n")


def test_mso_eval_inline_and_json():
    code, out = run("mso", "eval", "--bound", "8", "--strategy", "enum", "--backend", "python",
                    "--formula", "exists x. (x in S & x+x = 6)", "--assign", "S={1,3}", "--json")
    assert code == 0 and json.loads(out) == {"bound": 8, "strategy": "enum", "value": True}


def test_mso_errors(capsys):
    assert run("mso", "eval", "--bound", "8", "--formula", "x in y")[0] == 2
    assert "^" in capsys.readouterr().err
    assert run("mso", "eval", "--bound", "8", "--formula", "x = y", "--assign", "x=1")[0] == 2
    assert run("mso", "eval", "--bound", "4", "--formula", "x = x", "--assign", "x=9")[0] == 2
    assert run("mso", "eval", "--bound", "30", "--strategy", "enum",
               "--formula", "forall S. 0 in S")[0] == 2


def test_parse_assignment():
    assert parse_assignment("m=3, n=7,S={1,2},T={}") == {"m": 3, "n": 7, "S": {1, 2}, "T": set()}
    assert parse_assignment("") == {}
    with pytest.raises(ParseError):
        parse_assignment("m=x")
    with pytest.raises(ParseError):
        parse_assignment("=3")


# -- interpret and witness ---------------------------------------------------

def test_interpret_demo():
    code, out = run("interpret", "demo", "--base", "t^(1/2)", "--depth", "16", "--trials", "50")
    assert code == 0 and "[FAIL]" not in out and out.count("[PASS]") == 5


def test_interpret_demo_json():
    code, out = run("interpret", "demo", "--depth", "10", "--json")
    report = json.loads(out)
    assert code == 0 and report["pass"] and report["depth"] == 10


def test_interpret_two_sorted():
    code, out = run("interpret", "two-sorted", "--series", "1 + t + t^2", "--gamma", "1")
    assert code == 0 and out.splitlines() == ["T = 1", "R = true"]
    assert run("interpret", "demo", "--base", "2*t")[0] == 2


@pytest.mark.parametrize("argv", [
    ("witness", "tp2", "--depth", "2", "--width", "3"),
    ("witness", "sop", "--length", "10"),
    ("witness", "sop", "--thetas=-1,0,1/2"),
    ("witness", "shatter", "--size", "6", "--rows", "2"),
])
def test_witness_commands(argv):
    code, out = run(*argv)
    assert code == 0 and json.loads(out)["pass"] is True


def test_witness_sop_report():
    report = json.loads(run("witness", "sop", "--length", "10")[1])
    assert report["solution_sizes"] == list(range(1, 11)) and len(report["universe"]) == 20


def test_witness_usage_errors():
    assert run("witness", "sop", "--thetas", "1,0")[0] == 2
    assert run("witness", "tp2", "--depth", "4")[0] == 2
    assert run("witness", "shatter", "--size", "2", "--rows", "3")[0] == 2


def test_witness_is_deterministic():
    assert run("witness", "tp2", "--depth", "2", "--width", "2") == \
        run("witness", "tp2", "--depth", "2", "--width", "2")


# -- configuration -----------------------------------------------------------

def test_defaults():
    cfg = config.load(environ={})
    assert (cfg.group, cfg.field, cfg.bound, cfg.output) == ("rat", "rat", 64, "text")
    assert cfg.caps().exponent == 3


def test_file_then_flags(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"group": "int", "bound": 16, "output": "json"}))
    env = {config.ENV_VAR: str(path)}
    cfg = config.load(environ=env)
    assert (cfg.group, cfg.bound, cfg.output) == ("int", 16, "json")
    cfg = config.load({"group": "lex2", "bound": None}, environ=env)
    assert (cfg.group, cfg.bound) == ("lex2", 16)


@pytest.mark.parametrize("content", ['{"colour": 1}', "[1]", "{", '{"bound": 0}', '{"field": "fp"}'])
def test_bad_config_files(tmp_path, content):
    path = tmp_path / "cfg.json"
    path.write_text(content)
    with pytest.raises(UsageError):
        config.load(environ={config.ENV_VAR: str(path)})


def test_missing_config_file(tmp_path):
    with pytest.raises(UsageError):
        config.load(environ={config.ENV_VAR: str(tmp_path / "absent.json")})


def test_cli_reads_config_file(tmp_path, monkeypatch):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"group": "int", "output": "json", "bound": 16}))
    monkeypatch.setenv(config.ENV_VAR, str(path))
    code, out = run("series", "val", "t^3")
    assert code == 0 and json.loads(out) == {"valuation": "3"}
    assert run("series", "parse", "t^(1/2)")[0] == 2  # the file chose integer exponents
    assert run("series", "parse", "t^(1/2)", "--group", "rat")[0] == 0
    code, out = run("mso", "eval", "--formula", "x = 15", "--assign", "x=15")
    assert json.loads(out) == {"bound": 16, "strategy": "lfp", "value": True}
    path.write_text('{"bound": -3}')
    assert run("series", "val", "t")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hahntrunc", "series", "mul", "1+t", "1-t"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "1 - t^(2)\n"
    proc = subprocess.run([sys.executable, "-m", "hahntrunc", "series", "parse", "2 t"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2 and "^" in proc.stderr
