"""
zerocap/services/quantities/results.py: the record every quantity returns.

A quantity is solved twice, as its primal and as its dual program, and the
two values are compared. The primal value is reported; the dual value is the
certificate on the other side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from zerocap.utils.config import settings
from zerocap.utils.constants import INTEGER_TAG_TOL, OPTIMAL
from zerocap.utils.logger import setup_logging
from zerocap.services.sdp import LmiResult, SolveOptions

logger = setup_logging(__name__)

FLOOR = "floor"
CEIL = "ceil"
NONE = "none"


@dataclass
class QuantityResult:
    quantity: str
    value: float
    primal_value: float = math.nan
    dual_value: float = math.nan
    status: str = OPTIMAL
    rounding: str = NONE
    primal_witnesses: dict[str, Any] = field(default_factory=dict)
    dual_witnesses: dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0
    subject: str = ""
    notes: dict[str, Any] = field(default_factory=dict)
    crosschecks: dict[str, float] = field(default_factory=dict)
    tolerance: Optional[float] = None

    @property
    def crosscheck_gap(self) -> float:
        if not (math.isfinite(self.primal_value) and math.isfinite(self.dual_value)):
            return math.inf
        return abs(self.primal_value - self.dual_value)

    @property
    def integer_part(self) -> Optional[int]:
        """Floor or ceiling of the value; values within 1e-6 of an integer snap to it."""
        if self.rounding == NONE or not math.isfinite(self.value):
            return None
        k = round(self.value)
        if abs(self.value - k) <= INTEGER_TAG_TOL:
            return int(k)
        return int(math.floor(self.value) if self.rounding == FLOOR else math.ceil(self.value))

    @property
    def bits(self) -> float:
        return math.log2(self.value) if self.value > 0 and math.isfinite(self.value) else math.nan

    @property
    def agreement_tol(self) -> float:
        """Absolute bound for every cross-check; `tolerance` replaces the relative default."""
        if self.tolerance is not None:
            return self.tolerance
        return settings.CROSSCHECK_TOL * (1 + abs(self.value))

    @property
    def ok(self) -> bool:
        tol = self.agreement_tol
        return (
            self.status == OPTIMAL
            and self.crosscheck_gap <= tol
            and all(gap <= tol for gap in self.crosschecks.values())
        )

    def summary(self) -> dict:
        out = {
            "quantity": self.quantity,
            "subject": self.subject,
            "value": self.value,
            "integer_part": self.integer_part,
            "bits": self.bits,
            "primal_value": self.primal_value,
            "dual_value": self.dual_value,
            "gap": self.crosscheck_gap,
            "status": self.status,
            "seconds": self.seconds,
        }
        out.update({k: v for k, v in self.notes.items() if isinstance(v, (int, float, str, bool))})
        return out


def acceptable(res: LmiResult, options: Optional[SolveOptions] = None) -> bool:
    """Optimal, or stopped with residuals close enough to the tolerances to trust the value."""
    if res.status == OPTIMAL:
        return True
    if res.solution is None:
        return False
    gap_tol = options.gap_tol if options else settings.GAP_TOL
    feas_tol = options.feas_tol if options else settings.FEAS_TOL
    return res.solution.near_optimal(gap_tol, feas_tol)


def combine(
    quantity: str,
    primal: LmiResult,
    dual: LmiResult,
    rounding: str = NONE,
    subject: str = "",
    options: Optional[SolveOptions] = None,
    notes: Optional[dict] = None,
) -> QuantityResult:
    """Merge independent primal and dual solves into one QuantityResult."""
    if acceptable(primal, options) and acceptable(dual, options):
        status = OPTIMAL
    else:
        status = primal.status if not acceptable(primal, options) else dual.status
        logger.warning(f"{quantity}[{subject}]: primal {primal.status}, dual {dual.status}")

    result = QuantityResult(
        quantity=quantity,
        value=float(primal.value),
        primal_value=float(primal.value),
        dual_value=float(dual.value),
        status=status,
        rounding=rounding,
        primal_witnesses=dict(primal.variables),
        dual_witnesses=dict(dual.variables),
        seconds=primal.seconds + dual.seconds,
        subject=subject,
        notes=dict(notes or {}),
    )
    if status == OPTIMAL and not result.ok:
        logger.warning(
            f"{quantity}[{subject}]: primal {result.primal_value:.10g} and dual {result.dual_value:.10g} "
            f"disagree by {result.crosscheck_gap:.3e}"
        )
    logger.info(f"{quantity}[{subject}] = {result.value:.10g} ({status}, {result.seconds:.2f}s)")
    return result


def closed_form(quantity: str, value: float, subject: str = "", rounding: str = NONE, **notes) -> QuantityResult:
    """A value known exactly; primal and dual coincide by construction."""
    v = float(value)
    return QuantityResult(quantity, v, v, v, OPTIMAL, rounding, subject=subject, notes=notes)


def witness_array(value: Any) -> np.ndarray:
    """Entries of a witness, whatever shape it was stored in."""
    return np.asarray(value.entries if hasattr(value, "entries") else value)
