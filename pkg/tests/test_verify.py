import json

import pytest

from frwkilling import constant, exponential, secant
from frwkilling.cli import run
from frwkilling.verify import full_verify


@pytest.mark.parametrize("prof, dim, case", [
    (constant(2.0), 7, "Static"),
    (exponential(1.0, 1.0), 6, "Generic"),
    (secant(1.0), 10, "ConstantCurvature"),
])
def test_full_verify_passes(prof, dim, case):
    rep = full_verify(prof, seed=3, samples=12)
    failed = [c.name for c in rep.checks if not c.passed]
    assert not failed
    assert rep.summary["algebra_dimension"] == dim
    assert rep.summary["case"] == case


def test_full_verify_cli_constant(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert run(["full-verify", "--profile", "constant:2", "--output", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["summary"]["algebra_dimension"] == 7 and rep["verdict"] == "pass"
    assert rep["config"]["seed"] == 42 and rep["config"]["samples"] == 100


def test_full_verify_tight_tolerance_fails():
    rep = full_verify(constant(2.0), seed=3, samples=5, tolerances={"gamma": 1e-30})
    assert not rep.passed
    assert [c.name for c in rep.checks if not c.passed] == ["christoffel_closed_vs_numeric"]
