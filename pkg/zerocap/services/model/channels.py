"""
zerocap/services/model/channels.py: quantum channels in Kraus form and their Choi matrices.

Choi convention: J = Σ_ij |i⟩⟨j| ⊗ N(|i⟩⟨j|) = (id⊗N)(Φ) with Φ unnormalized,
factors (d_in, d_out), row-major index a·d_out + b. For a Kraus operator E the
column of J it contributes is vec(Eᵀ) = Σ_a |a⟩⊗E|a⟩.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from zerocap.utils.constants import CPTP_TOL
from zerocap.utils.errors import DimensionError, GraphError
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import HermitianMatrix, partial_trace

logger = setup_logging(__name__)


def choi_vector(e: np.ndarray) -> np.ndarray:
    """(1⊗E)|Φ⟩ for a d_out×d_in operator E."""
    return np.asarray(e, dtype=complex).T.reshape(-1)


def _as_kraus(kraus: Iterable, d_in: Optional[int], d_out: Optional[int]) -> tuple[list[np.ndarray], int, int]:
    ops = [np.atleast_2d(np.asarray(k, dtype=complex)) for k in kraus]
    if not ops:
        raise GraphError("empty Kraus list")
    shape = ops[0].shape
    for i, k in enumerate(ops):
        if k.ndim != 2 or k.shape != shape:
            raise DimensionError(f"Kraus operator {i} has shape {k.shape}, expected {shape}", factor=i)
    d_out = shape[0] if d_out is None else int(d_out)
    d_in = shape[1] if d_in is None else int(d_in)
    if shape != (d_out, d_in):
        raise DimensionError(f"Kraus operators are {shape}, expected {(d_out, d_in)}")
    return ops, d_in, d_out


class Channel:
    """
    CP map A → B given by Kraus operators (d_out × d_in matrices).

    Non-trace-preserving input is accepted with a warning and flagged through
    `trace_preserving` / `tp_deviation`; compositions of uncertain correlations
    rely on that flag rather than an exception.
    """

    def __init__(
        self,
        kraus: Iterable,
        d_in: Optional[int] = None,
        d_out: Optional[int] = None,
        *,
        name: Optional[str] = None,
    ):
        ops, d_in, d_out = _as_kraus(kraus, d_in, d_out)
        for k in ops:
            k.setflags(write=False)
        self._kraus = tuple(ops)
        self.d_in = d_in
        self.d_out = d_out
        self.name = name or f"channel[{d_in}->{d_out}]"

        gram = sum(k.conj().T @ k for k in ops)
        self.tp_deviation = float(np.abs(gram - np.eye(d_in)).max())
        self.trace_preserving = self.tp_deviation <= CPTP_TOL
        if not self.trace_preserving:
            logger.warning(f"{self.name}: Σ E†E deviates from identity by {self.tp_deviation:.2e}; not trace preserving")

        vecs = np.array([choi_vector(k) for k in ops]).T
        self._choi = HermitianMatrix(vecs @ vecs.conj().T, (d_in, d_out))

    # ── Accessors ────────────────────────────────────────────────────────
    @property
    def kraus(self) -> tuple[np.ndarray, ...]:
        return self._kraus

    @property
    def choi(self) -> HermitianMatrix:
        return self._choi

    def __repr__(self) -> str:
        return f"Channel({self.name}, d_in={self.d_in}, d_out={self.d_out}, kraus={len(self._kraus)})"

    # ── Action ───────────────────────────────────────────────────────────
    def apply(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.d_in, self.d_in):
            raise DimensionError(f"{self.name} expects a {self.d_in}×{self.d_in} input, got {rho.shape}")
        return sum(k @ rho @ k.conj().T for k in self._kraus)

    def adjoint_apply(self, sigma) -> np.ndarray:
        sigma = np.asarray(sigma, dtype=complex)
        if sigma.shape != (self.d_out, self.d_out):
            raise DimensionError(f"{self.name} adjoint expects a {self.d_out}×{self.d_out} input, got {sigma.shape}")
        return sum(k.conj().T @ sigma @ k for k in self._kraus)

    def tensor(self, other: "Channel") -> "Channel":
        kraus = [np.kron(a, b) for a in self._kraus for b in other._kraus]
        return Channel(kraus, self.d_in * other.d_in, self.d_out * other.d_out, name=f"{self.name}⊗{other.name}")

    def then(self, other: "Channel") -> "Channel":
        """other ∘ self."""
        if other.d_in != self.d_out:
            raise DimensionError(f"cannot feed {self.d_out}-dim output into {other.d_in}-dim input")
        kraus = [b @ a for a in self._kraus for b in other._kraus]
        return channel_from_choi(Channel(kraus, self.d_in, other.d_out).choi, self.d_in, other.d_out)

    def is_constant(self, tol: float = 1e-9) -> bool:
        """Whether N(X) = tr(X)·ρ for a fixed ρ, i.e. J = 1_A ⊗ ρ."""
        rho = partial_trace(self._choi, [1]).entries / self.d_in
        return bool(np.abs(self._choi.entries - np.kron(np.eye(self.d_in), rho)).max() <= tol)


def choi_from_kraus(kraus: Sequence, d_in: Optional[int] = None, d_out: Optional[int] = None) -> Channel:
    return Channel(kraus, d_in, d_out)


def channel_from_choi(choi, d_in: int, d_out: int, tol: float = 1e-12, name: Optional[str] = None) -> Channel:
    """Canonical Kraus operators from the eigendecomposition of J."""
    j = HermitianMatrix(choi.entries if isinstance(choi, HermitianMatrix) else choi, (d_in, d_out), tol=1e-7)
    w, v = j.eigvals, j.eigvecs
    top = max(float(w[-1]), 0.0)
    keep = w > tol * max(top, 1.0)
    if not np.any(keep):
        raise GraphError("Choi matrix has no positive eigenvalue")
    kraus = [np.sqrt(lam) * v[:, i].reshape(d_in, d_out).T for i, lam in zip(np.flatnonzero(keep), w[keep])]
    return Channel(kraus, d_in, d_out, name=name)
