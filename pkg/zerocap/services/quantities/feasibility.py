"""Whether a graph supports any assisted zero-error communication at all."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from zerocap.utils.constants import FEASIBILITY_TOL
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import HermitianMatrix, partial_trace
from zerocap.services.model import NCGraph

logger = setup_logging(__name__)


@dataclass
class FeasibilityReport:
    positive_capacity: bool
    path: str
    margin: float
    certificate: Optional[np.ndarray] = None
    cq_agrees: Optional[bool] = None
    details: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "positive_capacity": self.positive_capacity,
            "path": self.path,
            "margin": self.margin,
            "cq_agrees": self.cq_agrees,
        }
        out.update(self.details)
        return out


def feasibility_cq(K: NCGraph) -> FeasibilityReport:
    """
    Positive iff the output supports have trivial common intersection:
    the eigenvalue-1 eigenspace of (1/n)Σ P_i is exactly that intersection.
    """
    n = len(K.cq)
    avg = HermitianMatrix(sum(p.entries for p in K.cq) / n)
    w, v = avg.eigvals, avg.eigvecs
    common = v[:, w >= 1.0 - FEASIBILITY_TOL]
    positive = common.shape[1] == 0
    return FeasibilityReport(
        positive_capacity=positive,
        path="cq",
        margin=float(1.0 - w[-1]),
        certificate=None if positive else np.array(common[:, 0]),
        details={"common_support_dim": int(common.shape[1])},
    )


def feasibility_general(K: NCGraph) -> FeasibilityReport:
    """Positive iff tr_A(1 − P) is positive definite."""
    tq = partial_trace(K.Q, [1])
    w, v = tq.eigvals, tq.eigvecs
    positive = bool(w[0] > FEASIBILITY_TOL)
    return FeasibilityReport(
        positive_capacity=positive,
        path="general",
        margin=float(w[0]),
        certificate=None if positive else np.array(v[:, 0]),
    )


def feasibility(K: NCGraph) -> FeasibilityReport:
    general = feasibility_general(K)
    if not K.is_cq:
        return general
    cq = feasibility_cq(K)
    cq.cq_agrees = cq.positive_capacity == general.positive_capacity
    cq.details["general_margin"] = general.margin
    if not cq.cq_agrees:
        logger.warning(
            f"{K.name}: cq test says {cq.positive_capacity}, trace test says {general.positive_capacity}"
        )
    return cq
