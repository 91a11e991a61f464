"""
zerocap/services/reports/writer.py: QuantityResult → ReportRow, and JSON/CSV output.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Optional, Sequence, TextIO, Union

import numpy as np

from zerocap.utils.constants import CSV_HEADER, OPTIMAL
from zerocap.utils.errors import SpecError
from zerocap.utils.file_utils import ensure_directory, matrix_from_json, matrix_to_json, read_json, write_json
from zerocap.utils.logger import setup_logging
from zerocap.services.quantities import QuantityResult, witness_array
from zerocap.services.reports.models import Report, ReportRow

logger = setup_logging(__name__)


def _plain(value: Any) -> Any:
    """Notes may carry numpy scalars; keep only what JSON can hold."""
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    return None


def row_from_result(
    res: QuantityResult,
    witnesses: Sequence[str] = (),
    residuals: Optional[dict[str, float]] = None,
    closed: bool = False,
) -> ReportRow:
    status = "closed_form" if closed and res.status == OPTIMAL else res.status
    notes = {k: _plain(v) for k, v in res.notes.items()}
    return ReportRow(
        quantity=res.quantity,
        value=res.value,
        integer_part=res.integer_part,
        bits=res.bits,
        gap=None if closed else res.crosscheck_gap,
        status=status,
        seconds=res.seconds,
        subject=res.subject,
        primal_value=res.primal_value,
        dual_value=res.dual_value,
        witnesses=list(witnesses),
        residuals=residuals or dict(res.crosschecks),
        notes={k: v for k, v in notes.items() if v is not None},
    )


def value_row(quantity: str, value: float, subject: str = "", status: str = "closed_form", **notes) -> ReportRow:
    v = float(value)
    bits = math.log2(v) if v > 0 else None
    return ReportRow(quantity=quantity, value=v, bits=bits, status=status, subject=subject,
                     notes={k: _plain(x) for k, x in notes.items() if _plain(x) is not None})


def check_row(name: str, passed: bool, seconds: float = 0.0, **residuals) -> ReportRow:
    return ReportRow(quantity=name, status="pass" if passed else "fail", seconds=seconds, residuals=residuals)


def dump_witnesses(res: QuantityResult, directory: Union[str, Path]) -> list[str]:
    """One JSON file per quantity holding its primal and dual witnesses; load_witnesses reads it back."""
    directory = ensure_directory(Path(directory))
    payload = {"quantity": res.quantity, "subject": res.subject, "primal": {}, "dual": {}}
    for side, witnesses in (("primal", res.primal_witnesses), ("dual", res.dual_witnesses)):
        for name, w in witnesses.items():
            arr = witness_array(w)
            payload[side][name] = {
                "shape": list(arr.shape),
                "entries": matrix_to_json(arr.reshape(-1) if arr.ndim != 2 else arr),
            }
    safe = "".join(c if c.isalnum() or c in "-_." else "_" for c in f"{res.quantity}_{res.subject}")
    path = write_json(directory / f"{safe}.json", payload)
    logger.info(f"wrote witnesses of {res.quantity} to {path}")
    return [str(path)]


def load_witnesses(path: Union[str, Path]) -> dict[str, Any]:
    """Inverse of dump_witnesses: the same document with every witness back as a complex array."""
    doc = read_json(path)
    for side in ("primal", "dual"):
        if not isinstance(doc.get(side), dict):
            raise SpecError(f"{path}: witness dump has no {side!r} section")
        out = {}
        for name, item in doc[side].items():
            where = f"{path}:{side}.{name}"
            try:
                shape = tuple(int(s) for s in item["shape"])
                entries = item["entries"]
            except (KeyError, TypeError, ValueError):
                raise SpecError(f"{where}: expected an object with 'shape' and 'entries'") from None
            arr = matrix_from_json(entries, where, ndim=2 if len(shape) == 2 else 1)
            if arr.size != int(np.prod(shape)):
                raise SpecError(f"{where}: {arr.size} entries do not fill shape {shape}")
            out[name] = arr.reshape(shape)
        doc[side] = out
    return doc


def render_json(report: Report) -> str:
    return json.dumps(report.model_dump(), indent=2)


def render_csv(rows: Sequence[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_cells())
    return buf.getvalue()


def render_table(report: Report) -> str:
    """Aligned plain-text table for the terminal."""
    lines = [f"{report.command}" + (f"  {report.spec}" if report.spec else "")]
    for row in report.rows:
        value = "" if row.value is None else f"{row.value:.10g}"
        ip = "" if row.integer_part is None else f"  ⌊⌉={row.integer_part}"
        gap = "" if row.gap is None else f"  gap={row.gap:.2e}"
        lines.append(f"  {row.quantity:<24} {value:>16}{ip}{gap}  [{row.status}]")
    for key, val in report.details.items():
        if isinstance(val, (int, float, str, bool)):
            lines.append(f"  {key:<24} {val}")
    return "\n".join(lines) + "\n"


def emit(
    report: Report,
    fmt: str = "table",
    out: Optional[Union[str, Path]] = None,
    stream: Optional[TextIO] = None,
    text: Optional[str] = None,
) -> None:
    """Write the report; `text` replaces the rendering for commands with their own layout."""
    if text is None and fmt == "json":
        text = render_json(report) + "\n"
    elif text is None and fmt == "csv":
        text = render_csv(report.rows)
    elif text is None:
        text = render_table(report)
    if out:
        path = Path(out)
        if path.parent != Path(""):
            ensure_directory(path.parent)
        path.write_text(text, encoding="utf-8")
        logger.info(f"report written to {path}")
        return
    (stream or sys.stdout).write(text)
