# services/reports/__init__.py
from .models import Report, ReportRow, VALID_STATUSES
from .writer import (
    row_from_result,
    value_row,
    check_row,
    dump_witnesses,
    load_witnesses,
    render_json,
    render_csv,
    render_table,
    emit,
)

__all__ = [
    "Report",
    "ReportRow",
    "VALID_STATUSES",
    "row_from_result",
    "value_row",
    "check_row",
    "dump_witnesses",
    "load_witnesses",
    "render_json",
    "render_csv",
    "render_table",
    "emit",
]
