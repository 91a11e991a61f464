"""
End-to-end runs of the command line: output formats, exit codes and the
one-line error channel.
"""

import csv
import io
import json
import logging
import math

import pytest

from zerocap.cli import run
from zerocap.utils.constants import CSV_HEADER


def _json_out(capsys, argv):
    code = run(argv)
    return code, json.loads(capsys.readouterr().out)


def test_capacity_of_two_state_spec(capsys, specs_dir):
    code, report = _json_out(capsys, ["capacity", str(specs_dir / "two_state_075.json"), "--json"])
    assert code == 0
    ups = report["rows"][0]
    assert ups["quantity"] == "upsilon"
    assert ups["value"] == pytest.approx(1.0, abs=1e-6)
    assert ups["integer_part"] == 1
    assert report["details"]["feasibility_positive_capacity"] is True


def test_theta_of_pentagon(capsys, specs_dir):
    code, report = _json_out(capsys, ["theta", str(specs_dir / "c5.json"), "--json"])
    assert code == 0
    assert report["rows"][0]["value"] == pytest.approx(math.sqrt(5.0), abs=1e-6)


def test_alphastar_of_typewriter(capsys, specs_dir):
    code, report = _json_out(capsys, ["alphastar", str(specs_dir / "typewriter5.json"), "--json"])
    assert code == 0
    assert report["rows"][0]["value"] == pytest.approx(2.5, abs=1e-6)
    assert report["details"]["simplex_agrees"]


def test_capacity_with_noiseless_extension(capsys, specs_dir):
    code, report = _json_out(capsys, ["capacity", str(specs_dir / "two_state_075.json"), "--noiseless", "2", "--json"])
    assert code == 0
    quantities = [row["quantity"] for row in report["rows"]]
    assert quantities == ["upsilon", "superdense_bound", "upsilon_with_noiseless"]
    assert report["rows"][2]["value"] >= 2.0 - 1e-6
    assert report["details"]["noiseless_ratio"] >= 1.0 - 1e-6


def test_power_of_two_state(capsys, specs_dir):
    code, report = _json_out(capsys, ["power", str(specs_dir / "two_state_075.json"), "upsilon", "-n", "2", "--json"])
    assert code == 0
    assert report["details"]["n"] == 2
    rows = {row["quantity"]: row for row in report["rows"]}
    assert rows["upsilon"]["value"] >= 1.0 - 1e-6
    assert rows["upsilon_per_copy"]["value"] == pytest.approx(rows["upsilon"]["value"] ** 0.5, rel=1e-9)


def test_verify_superdense_code(capsys, specs_dir):
    code, report = _json_out(capsys, ["verify", str(specs_dir / "noiseless_quantum_2.json"), "-M", "4", "--json"])
    assert code == 0
    assert report["ok"]
    assert {row["quantity"] for row in report["rows"]} >= {"no_signalling", "zero_error"}
    assert all(row["status"] == "pass" for row in report["rows"])


def test_csv_report_header(capsys, specs_dir):
    assert run(["capacity", str(specs_dir / "noiseless_classical_3.json"), "--csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert tuple(lines[0].split(",")) == CSV_HEADER
    assert lines[1].startswith("upsilon,")


def test_sweep_csv(capsys):
    assert run(["sweep", "two_state", "--points", "3"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 3
    assert list(rows[0]) == ["beta_sq", "log_aram", "cmin_e", "log_sigma"]
    for row in rows:
        assert float(row["log_aram"]) <= float(row["cmin_e"]) <= float(row["log_sigma"])


def test_report_written_to_file(capsys, specs_dir, tmp_path):
    out = tmp_path / "reports" / "theta.json"
    assert run(["theta", str(specs_dir / "c5.json"), "--json", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["command"] == "theta"


def test_schema_lists_spec_types(capsys):
    assert run(["schema"]) == 0
    schema = json.loads(capsys.readouterr().out)
    assert "two_state" in json.dumps(schema)


# ── Failures ────────────────────────────────────────────────────────────
def test_bad_spec_exits_with_code_two(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "mystery"}')
    assert run(["capacity", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "error code=E_SPEC" in err


def test_unknown_argument_is_a_usage_error(capsys):
    assert run(["capacity", "--frobnicate"]) == 2
    assert "error code=E_USAGE" in capsys.readouterr().err


def test_too_many_messages_exits_with_code_three(capsys, specs_dir):
    assert run(["verify", str(specs_dir / "two_state_075.json"), "-M", "2"]) == 3
    assert "error code=E_INFEASIBLE" in capsys.readouterr().err


def test_regress_rejects_unknown_criterion(capsys):
    assert run(["regress", "--only", "99"]) == 2


def test_noiseless_extension_needs_a_positive_ell(capsys, specs_dir):
    assert run(["capacity", str(specs_dir / "two_state_075.json"), "--noiseless", "0"]) == 2
    assert "error code=E_USAGE" in capsys.readouterr().err


def test_power_above_the_cap_fails_with_one_line(capsys, caplog, specs_dir):
    assert run(["power", str(specs_dir / "two_state_075.json"), "upsilon", "-n", "4"]) == 1
    captured = capsys.readouterr()
    assert captured.out == ""
    lines = captured.err.strip().splitlines()
    assert len(lines) == 1
    assert lines[0].startswith("error code=E_LIMIT")
    assert "n=4" in lines[0]
    assert not [r for r in caplog.records if r.levelno >= logging.WARNING]
