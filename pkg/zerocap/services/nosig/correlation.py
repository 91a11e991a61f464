"""
zerocap/services/nosig/correlation.py: quantum no-signalling correlations and their checks.

A correlation Π: A_i ⊗ B_i → A_o ⊗ B_o is stored as its Choi matrix Ω on
A_i' ⊗ A_o ⊗ B_i' ⊗ B_o (input copy before output for each party). It is a
valid correlation when

    Ω ≥ 0                                         (CP)
    tr_{A_o B_o} Ω = 1                             (TP)
    tr_{A_i' A_o} Ω (X^T ⊗ 1) = 0   for tr X = 0  (A cannot signal to B)
    tr_{B_i' B_o} Ω (1 ⊗ Y^T) = 0   for tr Y = 0  (B cannot signal to A)

The two signalling families only need checking on a traceless Hermitian basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from zerocap.utils.constants import NS_TOL
from zerocap.utils.errors import DimensionError
from zerocap.utils.file_utils import matrix_from_json, matrix_to_json
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import HermitianMatrix, hermitian_basis, kron_perm
from zerocap.services.model import Channel

logger = setup_logging(__name__)

PORTS = ("A_in", "A_out", "B_in", "B_out")


class NsCorrelation:
    def __init__(
        self,
        omega,
        dims: Sequence[int],
        classical_ports: Optional[Sequence[bool]] = None,
        name: Optional[str] = None,
        witnesses: Optional[dict[str, Any]] = None,
    ):
        dims = tuple(int(d) for d in dims)
        if len(dims) != 4:
            raise DimensionError(f"a correlation has four ports, got dims {list(dims)}")
        entries = omega.entries if isinstance(omega, HermitianMatrix) else omega
        self.omega = HermitianMatrix(entries, dims, tol=1e-7)
        self.dims = dims
        self.classical_ports = tuple(bool(c) for c in (classical_ports or (False,) * 4))
        self.name = name or "omega"
        self.witnesses = dict(witnesses or {})

    def __repr__(self) -> str:
        return f"NsCorrelation({self.name}, dims={list(self.dims)})"

    @property
    def tensor(self) -> np.ndarray:
        """Ω as an 8-index array [a, o, b, q, a', o', b', q']."""
        return self.omega.entries.reshape(self.dims + self.dims)

    def mix(self, other: "NsCorrelation", weight: float) -> "NsCorrelation":
        """weight·self + (1 − weight)·other; the valid correlations form a convex set."""
        if other.dims != self.dims:
            raise DimensionError(f"cannot mix correlations of dims {list(self.dims)} and {list(other.dims)}")
        mixed = weight * self.omega.entries + (1.0 - weight) * other.omega.entries
        return NsCorrelation(mixed, self.dims, name=f"mix({self.name},{other.name})")

    # ── Constructors ─────────────────────────────────────────────────────
    @classmethod
    def from_classical_box(cls, Q, name: Optional[str] = None) -> "NsCorrelation":
        """Box Q[x, y, a, b] = Q(ab|xy), encoded as a diagonal Ω over ports [x, a, y, b]."""
        Q = np.asarray(Q, dtype=float)
        if Q.ndim != 4:
            raise DimensionError(f"classical box needs indices [x, y, a, b], got shape {Q.shape}")
        nx, ny, na, nb = Q.shape
        diag = np.transpose(Q, (0, 2, 1, 3)).ravel()
        return cls(np.diag(diag), (nx, na, ny, nb), classical_ports=(True,) * 4, name=name or "box")


def product_correlation(chan_A: Channel, chan_B: Channel) -> NsCorrelation:
    """Ω of the local product map chan_A ⊗ chan_B."""
    omega = kron_perm([chan_A.choi, chan_B.choi])
    dims = (chan_A.d_in, chan_A.d_out, chan_B.d_in, chan_B.d_out)
    return NsCorrelation(omega, dims, name=f"{chan_A.name}⊗{chan_B.name}")


# ── Checks ──────────────────────────────────────────────────────────────
@dataclass
class NsReport:
    cp: float
    tp: float
    a_to_b: float
    b_to_a: float
    tol: float = NS_TOL
    passed: dict[str, bool] = field(default_factory=dict)

    def __post_init__(self):
        self.passed = {
            "cp": self.cp <= self.tol,
            "tp": self.tp <= self.tol,
            "a_to_b": self.a_to_b <= self.tol,
            "b_to_a": self.b_to_a <= self.tol,
        }

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    @property
    def worst(self) -> float:
        return max(self.cp, self.tp, self.a_to_b, self.b_to_a)

    def as_dict(self) -> dict:
        return {"cp": self.cp, "tp": self.tp, "a_to_b": self.a_to_b, "b_to_a": self.b_to_a, "ok": self.ok}


def check_ns(corr: NsCorrelation, tol: float = NS_TOL) -> NsReport:
    dAi, dAo, dBi, dBo = corr.dims
    t = corr.tensor

    cp = max(0.0, -float(corr.omega.eigvals[0]))
    marginal = np.einsum("aobqxoyq->abxy", t).reshape(dAi * dBi, dAi * dBi)
    tp = float(np.abs(marginal - np.eye(dAi * dBi)).max())

    a_to_b = 0.0
    for X in hermitian_basis(dAi, traceless=True):
        # tr_{A_i' A_o} Ω (X^T ⊗ 1)
        r = np.einsum("aobqxocd,ax->bqcd", t, X)
        a_to_b = max(a_to_b, float(np.abs(r).max()))
    b_to_a = 0.0
    for Y in hermitian_basis(dBi, traceless=True):
        r = np.einsum("aobqxcyq,by->aoxc", t, Y)
        b_to_a = max(b_to_a, float(np.abs(r).max()))

    report = NsReport(cp, tp, a_to_b, b_to_a, tol)
    if not report.ok:
        failed = [k for k, v in report.passed.items() if not v]
        logger.warning(f"{corr.name}: no-signalling check fails {failed} (worst {report.worst:.3e})")
    return report


def classical_box_residuals(Q) -> dict[str, float]:
    """The classical equations directly on Q(ab|xy)."""
    Q = np.asarray(Q, dtype=float)
    norm = float(np.abs(Q.sum(axis=(2, 3)) - 1.0).max())
    negative = max(0.0, -float(Q.min()))
    bob = Q.sum(axis=2)      # [x, y, b], must not depend on x
    alice = Q.sum(axis=3)    # [x, y, a], must not depend on y
    return {
        "normalization": norm,
        "negativity": negative,
        "a_to_b": float(np.abs(bob - bob[:1]).max()),
        "b_to_a": float(np.abs(alice - alice[:, :1]).max()),
    }


# ── Action ──────────────────────────────────────────────────────────────
def apply_correlation(corr: NsCorrelation, X, Y) -> np.ndarray:
    """Π(X ⊗ Y) on A_o ⊗ B_o."""
    dAi, dAo, dBi, dBo = corr.dims
    X = np.asarray(X.entries if isinstance(X, HermitianMatrix) else X, dtype=complex)
    Y = np.asarray(Y.entries if isinstance(Y, HermitianMatrix) else Y, dtype=complex)
    if X.shape != (dAi, dAi) or Y.shape != (dBi, dBi):
        raise DimensionError(f"inputs {X.shape}, {Y.shape} do not fit ports {dAi}, {dBi}")
    out = np.einsum("aobqxpyr,ax,by->oqpr", corr.tensor, X, Y)
    return out.reshape(dAo * dBo, dAo * dBo)


def permute_messages(corr: NsCorrelation, perm: Sequence[int]) -> NsCorrelation:
    """Conjugate a code correlation [M_a, A, B, M_b] by the same relabelling on both message ports."""
    M = corr.dims[0]
    if corr.dims[3] != M or sorted(perm) != list(range(M)):
        raise DimensionError(f"{list(perm)} is not a permutation of the {M} messages")
    tau = np.eye(M)[list(perm)]
    U = np.kron(np.kron(tau, np.eye(corr.dims[1] * corr.dims[2])), tau)
    return NsCorrelation(U @ corr.omega.entries @ U.T, corr.dims, corr.classical_ports, name=f"τ·{corr.name}")


# ── JSON ────────────────────────────────────────────────────────────────
def correlation_to_json(corr: NsCorrelation) -> dict:
    return {
        "name": corr.name,
        "dims": list(corr.dims),
        "ports": list(PORTS),
        "classical_ports": list(corr.classical_ports),
        "omega": matrix_to_json(corr.omega.entries),
    }


def correlation_from_json(doc: dict) -> NsCorrelation:
    try:
        dims = doc["dims"]
        omega = matrix_from_json(doc["omega"], "omega")
    except KeyError as e:
        raise DimensionError(f"correlation document lacks {e.args[0]!r}") from e
    return NsCorrelation(omega, dims, doc.get("classical_ports"), name=doc.get("name"))
