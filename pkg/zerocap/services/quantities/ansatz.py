"""
zerocap/services/quantities/ansatz.py: certified lower bounds on Υ(K^⊗n) for two pure outputs.

The n-copy cq-graph has 2^n outputs P_{i^n} = Z^{i^n} P_{0^n} Z^{i^n}. Taking
every s_{i^n} = s and

    R_{0^n} = s (|ψ0⊥⟩⟨ψ0⊥|)^⊗n + Σ_{w=1}^{n-1} c_w Q_w,
    Q_w = P_w − |Φ_w⟩⟨Φ_w|   (weight-w projector minus its symmetric state)

the normalization Σ_{i^n} (sP_{i^n} + R_{i^n}) = 1 fixes s and every c_w,
and the remaining condition 0 ≤ R ≤ s(1 − P_{0^n}) reduces to c_w ≤ s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional

import numpy as np
from scipy.linalg import hadamard

from zerocap.utils.config import settings
from zerocap.utils.constants import ANSATZ_TOL
from zerocap.utils.errors import GraphError
from zerocap.utils.logger import setup_logging
from zerocap.services.quantities.closed_forms import TwoOutputForms, two_state_closed

logger = setup_logging(__name__)


@dataclass
class TwoStateReport:
    alpha: float
    n: int
    forms: TwoOutputForms
    s: float
    c: list[float]
    condition_lhs: float
    condition_rhs: float
    condition_holds: bool
    bound: Optional[float]
    verified: Optional[bool] = None
    residuals: dict[str, float] = field(default_factory=dict)
    R: Optional[np.ndarray] = None

    @property
    def beta(self) -> float:
        return math.sqrt(1.0 - self.alpha ** 2)

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "n": self.n,
            **self.forms.as_dict(),
            "s": self.s,
            "c": list(self.c),
            "condition_lhs": self.condition_lhs,
            "condition_rhs": self.condition_rhs,
            "condition_holds": self.condition_holds,
            "bound": self.bound,
            "verified": self.verified,
            **{f"residual_{k}": v for k, v in self.residuals.items()},
        }


def _weights(n: int) -> np.ndarray:
    return np.array([bin(k).count("1") for k in range(2 ** n)])


def ansatz_coefficients(alpha: float, n: int) -> tuple[float, list[float]]:
    """s and c_1 … c_{n-1}."""
    a2, b2 = alpha ** 2, 1.0 - alpha ** 2
    top = a2 ** n + b2 ** n
    s = 2.0 ** (-n) / top
    c = []
    for w in range(1, n):
        mixed = a2 ** w * b2 ** (n - w) + a2 ** (n - w) * b2 ** w
        c.append(s * (top - mixed) / (1.0 - 1.0 / math.comb(n, w)))
    return s, c


def ansatz_operator(alpha: float, n: int, s: float, c: list[float]) -> tuple[np.ndarray, np.ndarray]:
    """(R_{0^n}, P_{0^n}) as dense 2^n × 2^n matrices."""
    beta = math.sqrt(1.0 - alpha ** 2)
    psi = np.array([alpha, beta])
    perp = np.array([beta, -alpha])
    P0 = reduce(np.kron, [np.outer(psi, psi)] * n)
    R = s * reduce(np.kron, [np.outer(perp, perp)] * n)
    weights = _weights(n)
    for w, cw in zip(range(1, n), c):
        mask = (weights == w).astype(float)
        phi = mask / math.sqrt(math.comb(n, w))
        R = R + cw * (np.diag(mask) - np.outer(phi, phi))
    return R, P0


def verify_ansatz(R: np.ndarray, P0: np.ndarray, s: float) -> dict[str, float]:
    """Violations of R ≥ 0, R ≤ s(1 − P0) and of the twirled normalization."""
    dim = R.shape[0]
    signs = hadamard(dim)
    twirl = (signs.T @ signs) * (s * P0 + R)
    return {
        "psd": max(0.0, -float(np.linalg.eigvalsh(R)[0])),
        "dominance": max(0.0, -float(np.linalg.eigvalsh(s * (np.eye(dim) - P0) - R)[0])),
        "normalization": float(np.abs(twirl - np.eye(dim)).max()),
    }


def two_state_report(alpha: float, n: int) -> TwoStateReport:
    """Closed forms of the one-copy graph and the n-copy ansatz bound 1/(α^(2n)+β^(2n))."""
    beta = math.sqrt(max(0.0, 1.0 - alpha ** 2))
    if not (0.0 < beta < alpha < 1.0):
        raise GraphError(f"two_state report needs α > β > 0, got α={alpha}")
    if n < 1:
        raise GraphError(f"number of copies must be positive, got {n}")

    forms = two_state_closed(alpha)
    s, c = ansatz_coefficients(alpha, n)
    lhs = alpha ** n - beta ** n
    rhs = math.sqrt((n - 1) / n)
    # a single copy has no c_w to bound; the ansatz is then the trivial code
    holds = n == 1 or lhs <= rhs
    report = TwoStateReport(
        alpha=alpha,
        n=n,
        forms=forms,
        s=s,
        c=c,
        condition_lhs=lhs,
        condition_rhs=rhs,
        condition_holds=holds,
        bound=s * 2 ** n if holds else None,
    )
    if not holds:
        logger.info(f"ansatz condition fails at n={n}: {lhs:.6f} > {rhs:.6f}; no bound")
        return report

    if 4 ** n > settings.MAX_STATE_DIM:
        logger.info(f"ansatz for n={n} not materialized: 4^{n} exceeds {settings.MAX_STATE_DIM}")
        return report

    R, P0 = ansatz_operator(alpha, n, s, c)
    report.R = R
    report.residuals = verify_ansatz(R, P0, s)
    report.verified = all(v <= ANSATZ_TOL for v in report.residuals.values())
    level = "verified" if report.verified else "FAILED verification"
    logger.info(f"two_state α={alpha:.6g} n={n}: bound {report.bound:.8f} {level}")
    return report
