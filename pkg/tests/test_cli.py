"""Command line interface."""
from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from asailab.cli import main

SPEC = {
    "p": 3,
    "precision": 6,
    "fields": {
        "K": {"base": "F", "sqrt": 2},
        "Lb": {"base": "K", "sqrt": 3},
        "Lc": {"base": "K", "sqrt": [1, 1]},
    },
    "characters": {
        "one": {"kind": "trivial", "field": "K"},
        "om": {"field": "Lc", "level": 1, "images": ["1/80"],
               "uniformizer": {"zeta": "1/8", "qexp": "0"}},
    },
    "representations": {
        "sigma1": {"variant": "steinberg", "chi": "one"},
        "pi11": {"variant": "principal", "lam": "one", "mu": "one"},
        "cusp": {"variant": "dihedral", "omega": "om"},
    },
    "commands": ["classify", "check-egal"],
}


@pytest.fixture
def spec_file(tmp_path: Path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(SPEC, indent=2))
    return str(path)


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_check_egal_text(spec_file):
    res = run("check-egal", "--spec", spec_file, "--object", "sigma1")
    assert res.exit_code == 0, res.output
    assert "equal: true" in res.output
    assert "L_W  = 1/(1 - q^-1*X)(1 - e(1/2)*X)" in res.output
    assert "L_As = 1/(1 - q^-1*X)(1 - e(1/2)*X)" in res.output


def test_classify(spec_file):
    res = run("classify", "--spec", spec_file)
    assert res.exit_code == 0
    assert "Lb: Biquadratic" in res.output
    assert "Lc: Cyclic4" in res.output


def test_json_schema_and_determinism(spec_file):
    a = run("las", "--spec", spec_file, "--json")
    b = run("las", "--spec", spec_file, "--json")
    assert a.exit_code == 0 and a.output == b.output
    recs = json.loads(a.output)
    assert [r["object"] for r in recs] == sorted(r["object"] for r in recs)
    for r in recs:
        assert set(r) == {"object", "command", "result", "factors", "metadata"}
        assert set(r["metadata"]) == {"choices", "ambiguities"}


@pytest.mark.parametrize("cmd", ["lw", "l1", "twists", "distinguished", "run"])
def test_other_commands(spec_file, cmd):
    res = run(cmd, "--spec", spec_file)
    assert res.exit_code == 0, res.output
    assert res.output.strip()


def test_verify_normbiquad(spec_file):
    res = run("verify", "normbiquad", "--spec", spec_file)
    assert res.exit_code == 0
    assert "verify: pass" in res.output


def test_verify_without_spec():
    res = run("verify", "classify", "--prime", "5")
    assert res.exit_code == 0
    assert "FAIL" not in res.output


def test_corpus_small():
    res = run("corpus", "--seed", "1", "--primes", "3", "--per-field", "2", "--json")
    assert res.exit_code == 0
    rec = json.loads(res.output)[0]
    assert rec["result"]["passed"] is True
    assert rec["metadata"]["choices"]["seed"] == 1


def test_parse_error_has_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "p": 3,\n  "fields": {\n}\n')
    res = run("lw", "--spec", str(path))
    assert res.exit_code == 2
    assert "bad.json:5" in res.output or "bad.json:4" in res.output


def test_unknown_reference_located(tmp_path):
    spec = json.loads(json.dumps(SPEC))
    spec["representations"]["sigma1"]["chi"] = "missing"
    path = tmp_path / "ref.json"
    path.write_text(json.dumps(spec, indent=2))
    res = run("lw", "--spec", str(path))
    assert res.exit_code == 2
    assert "representations.sigma1.chi" in res.output
    assert "missing" in res.output


def test_inadmissible_is_reported_with_name(tmp_path):
    spec = json.loads(json.dumps(SPEC))
    spec["characters"]["half"] = {"kind": "abs", "field": "K", "a": 1}
    spec["representations"] = {"bad": {"variant": "principal", "lam": "half", "mu": "one"}}
    path = tmp_path / "inadm.json"
    path.write_text(json.dumps(spec, indent=2))
    res = run("las", "--spec", str(path))
    assert res.exit_code == 2
    assert "Inadmissible" in res.output and "bad" in res.output


def test_square_root_of_square_rejected(tmp_path):
    spec = json.loads(json.dumps(SPEC))
    spec["fields"]["Lbad"] = {"base": "K", "sqrt": [0, 1]}
    path = tmp_path / "sq.json"
    path.write_text(json.dumps(spec, indent=2))
    res = run("classify", "--spec", str(path))
    assert res.exit_code == 2
    assert "fields.Lbad" in res.output and "square" in res.output
