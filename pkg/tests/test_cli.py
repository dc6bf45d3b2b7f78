import csv
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from curvspec import cli

SMALL = {
    "name": "small",
    "cases": [{
        "name": "wavy",
        "geometry": {"kind": "curve", "closed": True, "L": 1.0, "N": 128,
                     "kappa": {"expr-id": "sinusoidal", "params": {"amplitude": 0.5, "frequency": 2}}},
        "potential": {"kind": "hg", "g": 0.25},
        "bounds": ["ratio", "curve-gap", "hile-protter", "yang"],
        "n_max": 6,
        "solver": {"N_list": [64, 128, 256]},
    }],
}


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "small.json"
    path.write_text(json.dumps(SMALL))
    return path


def _report_schema():
    return json.loads(resources.files("curvspec").joinpath("schemas/report.schema.json").read_text())


def test_list_scenarios(capsys):
    assert cli.main(["list-scenarios"]) == 0
    out = capsys.readouterr().out
    assert "circle-sharp" in out and "torus-inequalities" in out


def test_run_writes_outputs(scenario_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert cli.main(["run", str(scenario_file), "--out", str(out)]) == 0
    doc = json.loads((out / "small.json").read_text())
    jsonschema.validate(doc, _report_schema())
    assert doc["scenario"] == "small" and doc["seed"] == 0
    rows = list(csv.reader((out / "small.csv").read_text().splitlines()[1:]))
    assert rows[0][0] == "bound_id" and len(rows) - 1 == len(doc["reports"])
    assert "small:" in capsys.readouterr().out


def test_run_is_reproducible(scenario_file, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cli.main(["run", str(scenario_file), "--out", str(a), "--format", "json"])
    cli.main(["run", str(scenario_file), "--out", str(b), "--format", "json"])
    assert (a / "small.json").read_bytes() == (b / "small.json").read_bytes()
    assert not (a / "small.csv").exists()


def test_run_builtin(tmp_path):
    assert cli.main(["run", "circle-sharp", "--out", str(tmp_path)]) == 0
    jsonschema.validate(json.loads((tmp_path / "circle-sharp.json").read_text()), _report_schema())


def test_converge_writes_orders(scenario_file, tmp_path):
    assert cli.main(["converge", str(scenario_file), "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "small-orders.csv").read_text().splitlines()
    assert lines[0].startswith("# ") and lines[1].startswith("case,quantity,N")


def test_malformed_scenarios(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert cli.main(["run", str(broken), "--out", str(tmp_path)]) == 64
    bad = tmp_path / "bad.json"
    doc = json.loads(json.dumps(SMALL))
    doc["cases"][0]["bounds"] = ["nonsense"]
    bad.write_text(json.dumps(doc))
    assert cli.main(["run", str(bad), "--out", str(tmp_path)]) == 64
    assert "$.cases[0].bounds[0]" in capsys.readouterr().err
    assert cli.main(["run", str(tmp_path / "missing.json")]) == 64
    assert cli.main(["run", "circle-sharp", "--seed", "-1", "--out", str(tmp_path)]) == 64


def test_converge_without_refinement_is_usage_error(tmp_path):
    doc = json.loads(json.dumps(SMALL))
    del doc["cases"][0]["solver"]
    path = tmp_path / "norefine.json"
    path.write_text(json.dumps(doc))
    assert cli.main(["converge", str(path), "--out", str(tmp_path)]) == 64


def test_dense_cap_exceeded(scenario_file, tmp_path):
    assert cli.main(["run", str(scenario_file), "--out", str(tmp_path), "--dense-cap", "32"]) == 64


@pytest.mark.parametrize("status,code", [("fail", 2), ("inconclusive", 3)])
def test_exit_codes_follow_report_status(monkeypatch, tmp_path, capsys, status, code):
    from curvspec.report import BoundReport

    bad = BoundReport("ratio", 6.0, 5.0, case="c", params={"n": 1}, status=status)
    monkeypatch.setattr(cli, "run_scenario", lambda *a, **k: [BoundReport("ratio", 1.0, 5.0), bad])
    assert cli.main(["run", "circle-sharp", "--out", str(tmp_path)]) == code
    assert status.upper() in capsys.readouterr().out


def test_solver_failure_exit_code(monkeypatch, tmp_path):
    from curvspec.errors import SolverFailure

    def boom(*a, **k):
        raise SolverFailure("no convergence", {"iterations": 0})

    monkeypatch.setattr(cli, "run_scenario", boom)
    assert cli.main(["run", "circle-sharp", "--out", str(tmp_path)]) == 70


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "curvspec.cli", "list-scenarios"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "sphere-yang" in proc.stdout
