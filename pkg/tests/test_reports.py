"""
Report rows: validation of numeric fields and statuses, and the CSV layout.
"""

import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from zerocap.cli import run
from zerocap.utils.constants import CSV_HEADER
from zerocap.utils.errors import SpecError
from zerocap.services.model import graph_from_spec, load_spec
from zerocap.services.quantities import FLOOR, QuantityResult, upsilon, witness_array
from zerocap.services.reports import (
    ReportRow,
    check_row,
    dump_witnesses,
    load_witnesses,
    render_csv,
    row_from_result,
    value_row,
)


def test_non_finite_values_become_none():
    row = ReportRow(quantity="upsilon", value=float("nan"), gap=np.float64(np.inf), status="optimal",
                    residuals={"a": 1e-9, "b": float("nan")})
    assert row.value is None
    assert row.gap is None
    assert row.residuals == {"a": 1e-9}


def test_unknown_status_is_rejected():
    with pytest.raises(ValidationError):
        ReportRow(quantity="upsilon", status="probably")


def test_row_from_result_keeps_plain_notes():
    res = QuantityResult("upsilon", 3.0, 3.0, 3.0, rounding=FLOOR,
                         notes={"path": "cq", "ratio": np.float64(1.5), "matrix": np.eye(2)})
    row = row_from_result(res)
    assert row.integer_part == 3
    assert row.bits == pytest.approx(math.log2(3.0))
    assert row.notes == {"path": "cq", "ratio": 1.5}


def test_check_and_value_rows():
    assert check_row("no_signalling", False, worst=1e-3).status == "fail"
    assert value_row("superdense_bound", 4.0).bits == pytest.approx(2.0)


def test_csv_has_fixed_header():
    text = render_csv([value_row("superdense_bound", 2.0), check_row("ns", True)])
    lines = text.splitlines()
    assert tuple(lines[0].split(",")) == CSV_HEADER
    assert lines[1].split(",")[:2] == ["superdense_bound", "2.0"]
    assert len(lines) == 3


# ── Witness dumps ───────────────────────────────────────────────────────
def _assert_same_witnesses(res: QuantityResult, loaded: dict, atol: float = 1e-15) -> None:
    for side, witnesses in (("primal", res.primal_witnesses), ("dual", res.dual_witnesses)):
        assert set(loaded[side]) == set(witnesses)
        for name, w in witnesses.items():
            expected = witness_array(w)
            assert loaded[side][name].shape == expected.shape
            np.testing.assert_allclose(loaded[side][name], expected, atol=atol)


def test_witness_dump_reloads(two_state_075, tmp_path):
    res = upsilon(two_state_075)
    assert res.primal_witnesses and res.dual_witnesses
    [path] = dump_witnesses(res, tmp_path)
    loaded = load_witnesses(path)
    assert loaded["quantity"] == "upsilon"
    _assert_same_witnesses(res, loaded)


def test_vector_and_matrix_witnesses_stay_distinct(tmp_path):
    res = QuantityResult("shapes", 1.0, 1.0, 1.0, subject="shapes",
                         primal_witnesses={"v": np.array([1.0, 2.0j]), "m": np.array([[1.0, 2.0j]])},
                         dual_witnesses={"t": np.arange(8.0).reshape(2, 2, 2)})
    loaded = load_witnesses(dump_witnesses(res, tmp_path)[0])
    assert loaded["primal"]["v"].shape == (2,)
    assert loaded["primal"]["m"].shape == (1, 2)
    _assert_same_witnesses(res, loaded)


def test_cli_witness_dump_reloads(capsys, specs_dir, tmp_path):
    spec = specs_dir / "noiseless_quantum_2.json"
    assert run(["capacity", str(spec), "--json", "--dump-witness", str(tmp_path)]) == 0
    row = json.loads(capsys.readouterr().out)["rows"][0]
    loaded = load_witnesses(row["witnesses"][0])
    assert loaded["subject"] == row["subject"]
    _assert_same_witnesses(upsilon(graph_from_spec(load_spec(spec))), loaded, atol=1e-9)


def test_malformed_witness_file_is_a_spec_error(tmp_path):
    bad = tmp_path / "w.json"
    bad.write_text(json.dumps({"quantity": "upsilon", "primal": {"X": [[1, 0]]}, "dual": {}}))
    with pytest.raises(SpecError):
        load_witnesses(bad)
    bad.write_text(json.dumps({"quantity": "upsilon", "primal": {"X": {"shape": [2, 2], "entries": [[1, 0]]}},
                               "dual": {}}))
    with pytest.raises(SpecError):
        load_witnesses(bad)
    bad.write_text(json.dumps({"quantity": "upsilon", "primal": {}}))
    with pytest.raises(SpecError):
        load_witnesses(bad)
