"""
zerocap/services/quantities/closed_forms.py: exact values for the families with known answers.

Two output supports P0, P1 behave like two pure states whose overlap is the
maximal fidelity F = ‖P0 P1‖:

    A = 2/(1+F),   C_minE = H((1+F)/2),   Σ = 1 + √(1−F²)

Amplitude damping K_r has A = 2−r, Ã = (2−r)² and the entanglement-assisted
one-shot rate C_minE(K_r) = max_p H(p) + H(rp) − H((1−r)p).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.stats import entropy as _entropy

from zerocap.utils.constants import GOLDEN_TOL, ORTHOGONALITY_TOL
from zerocap.utils.errors import DimensionError, GraphError, SpecError
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import HermitianMatrix, is_projector, max_eigenvalue
from zerocap.services.model import NCGraph

logger = setup_logging(__name__)


# ── Entropies ───────────────────────────────────────────────────────────
def entropy(distribution: Sequence[float]) -> float:
    """Shannon entropy in bits; zero-probability outcomes contribute nothing."""
    p = np.asarray(distribution, dtype=float)
    if p.size == 0 or np.any(p < -1e-12):
        raise DimensionError("entropy needs a non-empty nonnegative distribution")
    p = np.clip(p, 0.0, None)
    total = p.sum()
    return float(_entropy(p / total, base=2)) if total > 0 else 0.0


def binary_entropy(p: float) -> float:
    if not -1e-12 <= p <= 1 + 1e-12:
        raise DimensionError(f"probability {p} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    return entropy([p, 1.0 - p])


# ── Maximal fidelity ────────────────────────────────────────────────────
def f_max(P0, P1) -> float:
    """max |⟨ψ0|ψ1⟩| over unit vectors in the two supports, i.e. ‖P0 P1‖."""
    p0 = P0 if isinstance(P0, HermitianMatrix) else HermitianMatrix(P0)
    p1 = P1 if isinstance(P1, HermitianMatrix) else HermitianMatrix(P1)
    if p0.dim != p1.dim:
        raise DimensionError(f"projectors act on different spaces ({p0.dim} vs {p1.dim})")
    for k, p in enumerate((p0, p1)):
        if not is_projector(p):
            raise GraphError(f"P{k} is not a projector", factor=k)
    return float(np.linalg.norm(p0.entries @ p1.entries, 2))


# ── Two outputs ─────────────────────────────────────────────────────────
@dataclass
class TwoOutputForms:
    overlap: float
    upsilon: float
    aram: float
    sigma: float
    cmin_e: float

    @property
    def chain(self) -> tuple[float, float, float]:
        """(log A, C_minE, log Σ), increasing for 0 < overlap < 1."""
        return math.log2(self.aram), self.cmin_e, math.log2(self.sigma)

    def as_dict(self) -> dict:
        return asdict(self)


def _two_output_forms(F: float) -> TwoOutputForms:
    F = min(max(abs(F), 0.0), 1.0)
    return TwoOutputForms(
        overlap=F,
        upsilon=2.0 if F <= ORTHOGONALITY_TOL else 1.0,
        aram=2.0 / (1.0 + F),
        sigma=1.0 + math.sqrt(max(0.0, 1.0 - F * F)),
        cmin_e=binary_entropy((1.0 + F) / 2.0),
    )


def two_state_general(P0, P1) -> TwoOutputForms:
    return _two_output_forms(f_max(P0, P1))


def two_state_closed(alpha: float) -> TwoOutputForms:
    """Pure outputs α|0⟩ ± β|1⟩: overlap α²−β², so A = 1/α², Σ = 1+2αβ, C_minE = H(α²)."""
    if not 0.0 < alpha <= 1.0:
        raise GraphError(f"two_state needs α in (0, 1], got {alpha}")
    beta_sq = 1.0 - alpha * alpha
    return _two_output_forms(alpha * alpha - beta_sq)


# ── Amplitude damping ───────────────────────────────────────────────────
def _damping_objective(p: float, r: float) -> float:
    return binary_entropy(p) + binary_entropy(r * p) - binary_entropy((1.0 - r) * p)


def damping_cmin_e(r: float) -> float:
    """max over p ∈ [0, 1] by golden-section search, bracketed from a coarse grid."""
    if not 0.0 <= r <= 1.0:
        raise GraphError(f"damping parameter r={r} outside [0, 1]")
    grid = np.linspace(0.0, 1.0, 101)
    values = np.array([_damping_objective(p, r) for p in grid])
    k = int(np.argmax(values))
    if k in (0, grid.size - 1) or np.ptp(values) < 1e-15:
        return float(values[k])
    res = minimize_scalar(
        lambda p: -_damping_objective(min(max(p, 0.0), 1.0), r),
        bracket=(grid[k - 1], grid[k], grid[k + 1]),
        method="golden",
        options={"xtol": GOLDEN_TOL},
    )
    return float(-res.fun)


@dataclass
class DampingForms:
    r: float
    aram: float
    aram_tilde: float
    superdense: float
    trace_A_P: tuple[float, float]
    cmin_e: float

    def as_dict(self) -> dict:
        return asdict(self)


def amplitude_damping_closed(r: float) -> DampingForms:
    if not 0.0 <= r <= 1.0:
        raise GraphError(f"damping parameter r={r} outside [0, 1]")
    return DampingForms(
        r=r,
        aram=2.0 - r,
        aram_tilde=(2.0 - r) ** 2,
        superdense=(4.0 - 2.0 * r) / (3.0 - r),
        trace_A_P=((3.0 - r) / (2.0 - r), (1.0 - r) / (2.0 - r)),
        cmin_e=damping_cmin_e(r),
    )


def cmin_e_closed(spec) -> float:
    """C_minE for a `two_state` or `amplitude_damping` GraphSpec."""
    kind = getattr(spec, "type", None)
    if kind == "two_state":
        return two_state_closed(spec.value).cmin_e
    if kind == "amplitude_damping":
        return damping_cmin_e(spec.r)
    raise SpecError(f"no closed form for C_minE of a {kind!r} spec")


# ── Superdense coding bound ─────────────────────────────────────────────
def superdense_bound(K: NCGraph) -> float:
    """d_A / ‖tr_A P‖: messages superdense coding sends through K without error."""
    return K.d_A / max_eigenvalue(K.trace_A())
