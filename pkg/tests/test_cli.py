from __future__ import annotations

import io
import json
from importlib import resources

import jsonschema
import pytest

from cfdim.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, run

SCHEMA = json.loads(resources.files("cfdim").joinpath("schema.json").read_text())


def invoke(*argv, environ=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err, environ=environ or {})
    return code, out.getvalue(), err.getvalue()


def invoke_json(*argv, environ=None):
    code, out, err = invoke(*argv, environ=environ)
    assert code == EXIT_OK, err
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return doc


@pytest.mark.parametrize(
    "argv",
    [
        ["expand", "7/10"],
        ["convergents", "1,2,3"],
        ["cylinder", "1,2,3"],
        ["count", "D:l=5,n=5"],
        ["enumerate", "D:l=2,n=2"],
        ["psi", "alog:2", "--N", "256", "--constants", "--predict", "--equivalence"],
        ["psi", "exp:2", "--N", "64", "--constants", "--tail", "sqrt"],
        ["xi", "--t-power", "3", "--N", "200"],
        ["construct", "point", "--t-values", "2,2,2", "--N", "3"],
        ["construct", "xtilde", "--psi", "alog:2", "--N", "20"],
        ["construct", "fset", "--a", "2", "--b", "1.5", "--N", "5"],
        ["construct", "dseq", "--psi", "exp:3", "--A", "3", "--eps", "0.1", "--N", "20"],
        ["construct", "point", "--t-psi", "exp:2", "--N", "30", "--budget-bits", "1000"],
        ["cover-sum", "C:alpha=1,eps=0.2,k=4", "--s", "0.5"],
        ["cover-sum", "A:alpha1=2,alpha2=2,eps=0.05,k=8", "--mode", "bound"],
        ["critical", "bounded:digits=1,2", "--k", "4-6"],
        ["critical", "D:l=1,n=4", "--k", "4"],
        ["mc-growth", "--samples", "3", "--N", "100"],
    ],
    ids=lambda a: " ".join(a),
)
def test_outputs_match_schema(argv):
    doc = invoke_json(*argv)
    assert doc["command"] == argv[0]


def test_expand_output():
    assert invoke_json("expand", "7/10")["word"] == ["1", "2", "3"]


def test_count_output():
    assert invoke_json("count", "D:l=5,n=5")["count"] == "126"


def test_log_only_point_is_flagged():
    doc = invoke_json("construct", "point", "--t-psi", "exp:2", "--N", "30", "--budget-bits", "1000")
    assert doc["word"]["exact"] is False


def test_bracket_failure_is_reported():
    doc = invoke_json("critical", "D:l=1,n=4", "--k", "4")
    assert doc["results"][0]["status"] == "bracket-failure"


@pytest.mark.parametrize(
    "argv",
    [
        ["expand", "3/2"],
        ["cylinder", "1,0,2"],
        ["psi", "n +"],
        ["psi", "sin(n)"],
        ["count", "D:l=0,n=2"],
        ["construct", "dseq", "--psi", "exp:2", "--A", "0.5", "--eps", "0.1"],
        ["--precision", "32", "expand", "1/3"],
        ["frobnicate"],
        ["expand"],
    ],
    ids=lambda a: " ".join(a),
)
def test_input_errors_exit_one(argv):
    code, out, err = invoke(*argv)
    assert code == EXIT_INPUT
    assert out == ""
    assert err


def test_budget_exit_two():
    code, _, err = invoke("enumerate", "D:l=20,n=20", "--budget-words", "100")
    assert code == EXIT_BUDGET
    assert "budget" in err
    code, _, _ = invoke("construct", "fset", "--a", "2", "--b", "2", "--N", "40", "--budget-bits", "10000")
    assert code == EXIT_BUDGET


def test_global_options_anywhere():
    a = invoke("--format", "csv", "count", "D:l=3,n=3")
    b = invoke("count", "D:l=3,n=3", "--format", "csv")
    assert a == b and a[0] == EXIT_OK


def test_seed_precedence(tmp_path):
    cfg = tmp_path / "cfdim.conf"
    cfg.write_text("# defaults for the run\nseed = 3\nprecision = 96\n")
    base = ["mc-growth", "--samples", "3", "--N", "100"]
    from_file = invoke_json(*base, "--config", str(cfg))
    assert from_file["seed"] == "3"
    from_env = invoke_json(*base, "--config", str(cfg), environ={"CFDIM_SEED": "4"})
    assert from_env["seed"] == "4"
    from_flag = invoke_json(*base, "--config", str(cfg), "--seed", "5", environ={"CFDIM_SEED": "4"})
    assert from_flag["seed"] == "5"
    assert from_flag != from_env


def test_bad_config_and_env(tmp_path):
    cfg = tmp_path / "bad.conf"
    cfg.write_text("colour = blue\n")
    assert invoke("expand", "1/3", "--config", str(cfg))[0] == EXIT_INPUT
    assert invoke("expand", "1/3", environ={"CFDIM_PRECISION": "lots"})[0] == EXIT_INPUT
    assert invoke("expand", "1/3", environ={"CFDIM_PRECISION": "48"})[0] == EXIT_INPUT


def test_printed_digits_stable_under_precision():
    # output carries 20 significant digits, all of which 128 bits already pin down
    lo = invoke_json("psi", "alog:2", "--predict", "--N", "256", "--constants")
    hi = invoke_json("--precision", "256", "psi", "alog:2", "--predict", "--N", "256", "--constants")
    assert lo == hi


def test_csv_and_pretty():
    code, out, _ = invoke("critical", "bounded:digits=1,2", "--k", "4,5", "--format", "csv")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) == 3 and "s_star" in lines[0]
    code, out, _ = invoke("cylinder", "1,2,3", "--format", "pretty")
    assert code == EXIT_OK and "9/13" in out


def test_output_is_deterministic():
    argv = ["psi", "exp:3", "--constants", "--N", "64"]
    assert invoke(*argv) == invoke(*argv)
