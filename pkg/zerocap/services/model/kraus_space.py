"""Whether an operator space is the Kraus space of some CPTP map."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from zerocap.utils.config import settings
from zerocap.utils.constants import INFEASIBLE, KRAUS_SPACE_EPS, OPTIMAL
from zerocap.utils.errors import SolverError
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import HermitianMatrix
from zerocap.services.model.graphs import NCGraph
from zerocap.services.sdp import LmiProgram

logger = setup_logging(__name__)


@dataclass
class KrausSpaceReport:
    valid: bool
    margin: float
    witness: Optional[HermitianMatrix]
    status: str

    def as_dict(self) -> dict:
        return {"valid": self.valid, "margin": self.margin, "status": self.status}


def validate_kraus_space(K: Union[NCGraph, Sequence], eps: float = KRAUS_SPACE_EPS, backend=None) -> KrausSpaceReport:
    """
    K is a Kraus space iff some positive definite R = [r_kl] gives
    Σ_kl r_kl E_k†E_l = 1 for an orthonormal basis {E_k}. The program
    maximizes the smallest eigenvalue t of R; valid iff t ≥ eps.
    """
    graph = K if isinstance(K, NCGraph) else NCGraph.from_kraus(K)
    ops = graph.kraus_basis()
    n, d_A = len(ops), graph.d_A

    prog = LmiProgram(f"kraus_space[{graph.name}]")
    R = prog.hermitian("R", n)
    t = prog.real("t")
    prog.add_psd("R-t", R - t * np.eye(n))

    # Σ_kl R_kl E_k†E_l is linear in R: entrywise sum against the stacked products
    gram = np.array([[ops[k].conj().T @ ops[l] for l in range(n)] for k in range(n)])
    lhs = sum(R[k, l] * gram[k, l] for k in range(n) for l in range(n))
    prog.add_equal("completeness", lhs, np.eye(d_A))
    prog.maximize(t)

    res = prog.solve(backend=backend)
    if res.status != OPTIMAL and not (res.solution and res.solution.near_optimal(settings.GAP_TOL, settings.FEAS_TOL)):
        if res.status == INFEASIBLE:
            # no Hermitian R at all reproduces the identity
            return KrausSpaceReport(False, float("-inf"), None, res.status)
        raise SolverError(f"Kraus-space program ended with status {res.status}")
    margin = float(res.value)
    witness = res["R"]
    valid = margin >= eps
    logger.debug(f"{graph.name}: Kraus-space margin {margin:.3e} ({'valid' if valid else 'invalid'})")
    return KrausSpaceReport(valid, margin, witness, res.status)
