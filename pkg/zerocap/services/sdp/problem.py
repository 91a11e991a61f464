"""
zerocap/services/sdp/problem.py: block-diagonal SDP in standard form and its real compilation.

Standard form (minimization):

    min  Σ_blocks ⟨C_b, X_b⟩   s.t.  Σ_blocks ⟨A_{k,b}, X_b⟩ = b_k,   X_b ⪰ 0

Blocks are complex Hermitian or real diagonal (the LP path). compile_problem
embeds each d-dim Hermitian block as a 2d-dim real symmetric block
[[Re, −Im], [Im, Re]] with coefficients halved, so ⟨Ã, X̃⟩ = ⟨A, X⟩ and the
reported values are the complex-domain values.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from zerocap.utils.config import settings
from zerocap.utils.constants import INTEGER_TAG_TOL, OPTIMAL
from zerocap.utils.errors import DimensionError, NotHermitianError
from zerocap.utils.file_utils import ensure_directory
from zerocap.utils.logger import setup_logging

logger = setup_logging(__name__)

HERMITIAN = "hermitian"
DIAGONAL = "diagonal"

_DUMP_SEQ = itertools.count()


@dataclass(frozen=True)
class SdpBlock:
    label: str
    dim: int
    kind: str = HERMITIAN


@dataclass
class SdpEquality:
    coeffs: dict[str, np.ndarray]
    rhs: float


@dataclass
class SdpProblem:
    """
    Standard-form problem. Coefficients are stored stacked per block:
    `stacks[label]` has shape (m, d, d) for Hermitian blocks and (m, d) for
    diagonal ones; a block absent from an equality has a zero slice.
    """
    blocks: list[SdpBlock]
    objective: dict[str, np.ndarray]
    stacks: dict[str, np.ndarray]
    rhs: np.ndarray
    name: str = "sdp"

    @classmethod
    def build(
        cls,
        blocks: list[SdpBlock],
        objective: dict[str, np.ndarray],
        equalities: list[SdpEquality],
        name: str = "sdp",
    ) -> "SdpProblem":
        """Assemble from one coefficient dict per equality (hand-written problems)."""
        m = len(equalities)
        stacks = {}
        for blk in blocks:
            shape = (m, blk.dim, blk.dim) if blk.kind == HERMITIAN else (m, blk.dim)
            stack = np.zeros(shape, dtype=complex if blk.kind == HERMITIAN else float)
            for k, eq in enumerate(equalities):
                if blk.label in eq.coeffs:
                    stack[k] = eq.coeffs[blk.label]
            stacks[blk.label] = stack
        obj = {}
        for blk in blocks:
            if blk.label in objective:
                obj[blk.label] = np.asarray(objective[blk.label])
        prob = cls(blocks, obj, stacks, np.array([eq.rhs for eq in equalities], dtype=float), name)
        prob.validate()
        return prob

    @property
    def num_equalities(self) -> int:
        return int(self.rhs.shape[0])

    @property
    def equalities(self) -> list[SdpEquality]:
        return [
            SdpEquality({b.label: self.stacks[b.label][k] for b in self.blocks}, float(self.rhs[k]))
            for k in range(self.num_equalities)
        ]

    def objective_of(self, blk: SdpBlock) -> np.ndarray:
        if blk.label in self.objective:
            return np.asarray(self.objective[blk.label])
        if blk.kind == HERMITIAN:
            return np.zeros((blk.dim, blk.dim), dtype=complex)
        return np.zeros(blk.dim)

    def validate(self) -> None:
        labels = [b.label for b in self.blocks]
        if len(set(labels)) != len(labels):
            raise DimensionError(f"duplicate block labels in {labels}")
        m = self.num_equalities
        for blk in self.blocks:
            if blk.kind not in (HERMITIAN, DIAGONAL):
                raise DimensionError(f"block {blk.label}: unknown kind {blk.kind!r}")
            want = (blk.dim, blk.dim) if blk.kind == HERMITIAN else (blk.dim,)
            c = self.objective_of(blk)
            if c.shape != want:
                raise DimensionError(f"objective of block {blk.label} has shape {c.shape}, expected {want}")
            stack = self.stacks.get(blk.label)
            if stack is None or stack.shape != (m,) + want:
                got = None if stack is None else stack.shape
                raise DimensionError(f"coefficients of block {blk.label} have shape {got}, expected {(m,) + want}")
            if blk.kind == HERMITIAN:
                _check_hermitian(c[None], f"objective block {blk.label}")
                _check_hermitian(stack, f"constraint block {blk.label}")
            else:
                if np.iscomplexobj(c) and np.abs(np.imag(c)).max(initial=0.0) > 1e-12:
                    raise NotHermitianError(f"diagonal block {blk.label} has complex objective")
                if np.iscomplexobj(stack) and np.abs(np.imag(stack)).max(initial=0.0) > 1e-12:
                    raise NotHermitianError(f"diagonal block {blk.label} has complex coefficients")


def _check_hermitian(stack: np.ndarray, where: str) -> None:
    if stack.size == 0:
        return
    asym = np.abs(stack - np.conj(np.swapaxes(stack, -1, -2))).max()
    scale = max(1.0, float(np.abs(stack).max()))
    if asym > settings.HERMITIAN_TOL * scale:
        raise NotHermitianError(f"non-Hermitian coefficient in {where} (asymmetry {asym:.2e})")


# ── Solutions ────────────────────────────────────────────────────────────
@dataclass
class SdpResiduals:
    primal: float = float("inf")
    dual: float = float("inf")
    gap: float = float("inf")


@dataclass
class SdpSolution:
    status: str
    primal_value: float
    dual_value: float
    X: dict[str, np.ndarray] = field(default_factory=dict)
    y: np.ndarray = field(default_factory=lambda: np.zeros(0))
    Z: dict[str, np.ndarray] = field(default_factory=dict)
    residuals: SdpResiduals = field(default_factory=SdpResiduals)
    iterations: int = 0
    seconds: float = 0.0
    backend: str = "embedded"

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    @property
    def integer_tag(self) -> Optional[int]:
        """Nearest integer when the primal value is within 1e-6 of it."""
        v = self.primal_value
        if not np.isfinite(v):
            return None
        k = int(round(v))
        return k if abs(v - k) <= INTEGER_TAG_TOL else None

    def near_optimal(self, gap_tol: float, feas_tol: float, slack: float = 1e3) -> bool:
        """Optimal, or stalled with residuals within `slack` times the tolerances."""
        if self.optimal:
            return True
        r = self.residuals
        return (
            np.isfinite(self.primal_value)
            and r.primal <= slack * feas_tol
            and r.dual <= slack * feas_tol
            and r.gap <= slack * gap_tol * (1 + abs(self.primal_value))
        )


def _cone_violation(x: np.ndarray, kind: str) -> float:
    x = np.asarray(x)
    if kind == DIAGONAL:
        low = float(np.min(np.real(x))) if x.size else 0.0
    else:
        low = float(np.linalg.eigvalsh((x + x.conj().T) / 2)[0]) if x.size else 0.0
    return max(0.0, -low)


def measure_residuals(
    problem: SdpProblem,
    X: dict[str, np.ndarray],
    Z: dict[str, np.ndarray],
    primal_value: float,
    dual_value: float,
) -> SdpResiduals:
    """
    Relative residuals of a candidate pair, on the same scale the embedded
    solver reports: ‖A(X) − b‖ plus the cone violation of X over 1 + ‖b‖, and
    the cone violation of Z = C − A*(y) over 1 + ‖C‖.
    """
    ax = np.zeros(problem.num_equalities)
    primal_cone = dual_cone = norm_c = 0.0
    for blk in problem.blocks:
        x = np.asarray(X[blk.label])
        stack = np.asarray(problem.stacks[blk.label])
        if blk.kind == HERMITIAN:
            ax += np.real(np.einsum("kij,ji->k", stack, x))
        else:
            ax += np.real(stack @ x)
        primal_cone = max(primal_cone, _cone_violation(x, blk.kind))
        dual_cone = max(dual_cone, _cone_violation(Z[blk.label], blk.kind))
        norm_c += float(np.linalg.norm(problem.objective_of(blk))) ** 2
    norm_b = float(np.linalg.norm(problem.rhs))
    pres = (float(np.linalg.norm(ax - problem.rhs)) + primal_cone) / (1 + norm_b)
    dres = dual_cone / (1 + np.sqrt(norm_c))
    gap = abs(primal_value - dual_value) if np.isfinite(primal_value) and np.isfinite(dual_value) else np.inf
    return SdpResiduals(primal=pres, dual=dres, gap=gap)


# ── Real compilation ─────────────────────────────────────────────────────
def embed(h: np.ndarray) -> np.ndarray:
    """[[Re, −Im], [Im, Re]] on the last two axes."""
    re, im = np.real(h), np.imag(h)
    top = np.concatenate([re, -im], axis=-1)
    bottom = np.concatenate([im, re], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


def unembed(x: np.ndarray) -> np.ndarray:
    """Project a real symmetric 2d×2d matrix back to the d×d Hermitian it encodes."""
    d = x.shape[0] // 2
    x11, x12, x21, x22 = x[:d, :d], x[:d, d:], x[d:, :d], x[d:, d:]
    return (x11 + x22) / 2 + 1j * (x21 - x12) / 2


@dataclass
class CompiledSdp:
    """Real standard form: kinds 's' (symmetric) or 'l' (nonnegative orthant)."""
    labels: list[str]
    kinds: list[str]
    sizes: list[int]
    C: list[np.ndarray]
    A: list[np.ndarray]
    b: np.ndarray

    @property
    def m(self) -> int:
        return int(self.b.shape[0])


def compile_problem(problem: SdpProblem) -> CompiledSdp:
    problem.validate()
    labels, kinds, sizes, C, A = [], [], [], [], []
    for blk in problem.blocks:
        c = problem.objective_of(blk)
        stack = problem.stacks[blk.label]
        labels.append(blk.label)
        if blk.kind == HERMITIAN:
            kinds.append("s")
            sizes.append(2 * blk.dim)
            C.append(embed(np.asarray(c, dtype=complex)) / 2)
            A.append(embed(np.asarray(stack, dtype=complex)) / 2)
        else:
            kinds.append("l")
            sizes.append(blk.dim)
            C.append(np.real(np.asarray(c)).astype(float))
            A.append(np.real(np.asarray(stack)).astype(float))
    return CompiledSdp(labels, kinds, sizes, C, A, np.asarray(problem.rhs, dtype=float))


def decompile_blocks(problem: SdpProblem, real_blocks: list[np.ndarray], dual_slack: bool = False) -> dict[str, np.ndarray]:
    """Inverse embedding; dual slacks carry the halved scale and are doubled back."""
    out = {}
    for blk, x in zip(problem.blocks, real_blocks):
        if blk.kind == HERMITIAN:
            h = unembed(x)
            out[blk.label] = 2 * h if dual_slack else h
        else:
            out[blk.label] = np.array(x, dtype=float)
    return out


def dump_problem(problem: SdpProblem, path: Union[str, Path, None] = None) -> Path:
    """
    Plain-text sparse dump, one nonzero per line:

        <matrix> <block> <row> <col> <re|im> <value>

    matrix 0 is the objective, k ≥ 1 the k-th equality. Header comments list
    the blocks and the right-hand side.
    """
    if path is None:
        base = ensure_directory(Path(settings.DUMP_DIR or "."))
        safe = "".join(c if c.isalnum() or c in "-_.[]" else "_" for c in problem.name)
        path = base / f"{safe}-{int(time.time() * 1000)}-{next(_DUMP_SEQ)}.sdp.txt"
    path = Path(path)
    ensure_directory(path.parent)
    lines = [f"# problem {problem.name}"]
    for i, blk in enumerate(problem.blocks, start=1):
        lines.append(f"# block {i} {blk.label} {blk.kind} {blk.dim}")
    lines.append("# rhs " + " ".join(f"{v:.17g}" for v in problem.rhs))

    def emit(mat_idx: int, blk_idx: int, blk: SdpBlock, coeff: np.ndarray) -> None:
        coeff = np.asarray(coeff)
        if blk.kind == DIAGONAL:
            for r in np.flatnonzero(coeff):
                lines.append(f"{mat_idx} {blk_idx} {r} {r} re {float(np.real(coeff[r])):.17g}")
            return
        rows, cols = np.nonzero(np.triu(coeff))
        for r, c in zip(rows, cols):
            z = coeff[r, c]
            if np.real(z) != 0:
                lines.append(f"{mat_idx} {blk_idx} {r} {c} re {float(np.real(z)):.17g}")
            if np.imag(z) != 0:
                lines.append(f"{mat_idx} {blk_idx} {r} {c} im {float(np.imag(z)):.17g}")

    for i, blk in enumerate(problem.blocks, start=1):
        emit(0, i, blk, problem.objective_of(blk))
    for k in range(problem.num_equalities):
        for i, blk in enumerate(problem.blocks, start=1):
            emit(k + 1, i, blk, problem.stacks[blk.label][k])

    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.debug(f"dumped {problem.name} ({len(lines)} lines) to {path}")
    return path
