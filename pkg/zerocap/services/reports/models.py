"""
zerocap/services/reports/models.py: report documents written by the CLI.

Every numeric field is finite or absent: NaN and infinities become None
before validation, so JSON output never carries non-standard literals.
"""

from __future__ import annotations

import math
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator

from zerocap.utils.constants import CSV_HEADER, SOLVER_STATUSES

CHECK_STATUSES = ("closed_form", "pass", "fail", "reported")
VALID_STATUSES = set(SOLVER_STATUSES) | set(CHECK_STATUSES)


def _finite(v: Any) -> Optional[float]:
    if v is None:
        return None
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    if isinstance(v, complex):
        v = v.real
    v = float(v)
    return v if math.isfinite(v) else None


class ReportRow(BaseModel):
    quantity:      str
    value:         Optional[float] = None
    integer_part:  Optional[int] = None
    bits:          Optional[float] = None
    gap:           Optional[float] = None
    status:        str
    seconds:       float = 0.0
    subject:       str = ""
    primal_value:  Optional[float] = None
    dual_value:    Optional[float] = None
    witnesses:     list[str] = Field(default_factory=list)
    residuals:     dict[str, float] = Field(default_factory=dict)
    notes:         dict[str, Any] = Field(default_factory=dict)

    @field_validator("value", "bits", "gap", "primal_value", "dual_value", mode="before")
    @classmethod
    def finite_or_none(cls, v: Any) -> Optional[float]:
        return _finite(v)

    @field_validator("residuals", mode="before")
    @classmethod
    def finite_residuals(cls, v: dict) -> dict:
        return {k: r for k, r in ((k, _finite(x)) for k, x in (v or {}).items()) if r is not None}

    @field_validator("status")
    @classmethod
    def status_must_be_known(cls, v: str) -> str:
        if v not in VALID_STATUSES:
            raise ValueError(f"status '{v}' is not one of {sorted(VALID_STATUSES)}")
        return v

    def csv_cells(self) -> list[str]:
        row = self.model_dump()
        return ["" if row[k] is None else str(row[k]) for k in CSV_HEADER]


class Report(BaseModel):
    command:  str
    spec:     Optional[str] = None
    rows:     list[ReportRow] = Field(default_factory=list)
    details:  dict[str, Any] = Field(default_factory=dict)
    ok:       bool = True

    model_config = {"extra": "allow"}
