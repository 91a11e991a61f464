"""
zerocap/services/quantities/capacity.py: Υ(K), the no-signalling assisted independence number.

    Υ(K) = max tr S  s.t.  0 ≤ E ≤ S⊗1,  tr_A E = 1_B,  tr P(S⊗1 − E) = 0

floor(Υ(K)) is the largest number of messages a no-signalling assisted
one-shot code can send without error. W = S⊗1 − E is parametrized on the
range of 1 − P, so the orthogonality condition is exact structure rather
than a constraint the solver has to meet.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from scipy.linalg import block_diag

from zerocap.utils.constants import INFEASIBLE, INTEGER_TAG_TOL
from zerocap.utils.errors import InfeasibleRequest, SolverError
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import HermitianMatrix, projector_basis
from zerocap.services.model import NCGraph, noiseless_classical
from zerocap.services.sdp import LmiProgram, LmiResult, SolveOptions, inner, kron, partial_trace
from zerocap.services.quantities.results import FLOOR, QuantityResult, acceptable, combine

logger = setup_logging(__name__)


# ── Full formulation ────────────────────────────────────────────────────
def _upsilon_program(K: NCGraph, trace_S: Optional[float] = None) -> LmiProgram:
    dA, dB = K.d_A, K.d_B
    prog = LmiProgram(f"upsilon[{K.name}]")
    S = prog.hermitian("S", dA)
    E = prog.hermitian("E", dA * dB)
    W = kron(S, np.eye(dB)) - E
    VP, VQ = K.range_basis(), K.range_basis(complement=True)

    prog.add_psd("E", E)
    prog.add_equal("trA_E", partial_trace(E, (dA, dB), [1]), np.eye(dB))
    prog.add_equal("PW", VP.conj().T @ W)
    if VQ.shape[1]:
        prog.add_psd("W", VQ.conj().T @ W @ VQ)
    if trace_S is not None:
        prog.add_equal("trS", S.trace(), trace_S)
    prog.maximize(S.trace().real)
    return prog


def upsilon_primal(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    return _upsilon_program(K).solve(options, backend)


def upsilon_dual(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    """min tr T  s.t.  1⊗T ≥ F,  tr_B F = 1_A,  (1−P)F(1−P) ≤ 0."""
    dA, dB = K.d_A, K.d_B
    prog = LmiProgram(f"upsilon_dual[{K.name}]")
    T = prog.hermitian("T", dB)
    F = prog.hermitian("F", dA * dB)
    VQ = K.range_basis(complement=True)

    prog.add_psd("1T-F", kron(np.eye(dA), T) - F)
    prog.add_equal("trB_F", partial_trace(F, (dA, dB), [0]), np.eye(dA))
    if VQ.shape[1]:
        prog.add_psd("QFQ", -(VQ.conj().T @ F @ VQ))
    prog.minimize(T.trace().real)
    return prog.solve(options, backend)


# ── cq formulation ──────────────────────────────────────────────────────
def _upsilon_cq_program(K: NCGraph, total: Optional[float] = None) -> LmiProgram:
    """max Σ s_i  s.t.  0 ≤ R_i ≤ s_i(1−P_i),  Σ_i (s_i P_i + R_i) = 1."""
    dB, n = K.d_B, len(K.cq)
    prog = LmiProgram(f"upsilon_cq[{K.name}]")
    s = prog.real("s", n)
    prog.add_nonneg("s", s)
    normalization = 0
    for i, P_i in enumerate(K.cq):
        term = s[i] * P_i.entries
        V = projector_basis(P_i, complement=True)
        if V.shape[1]:
            R = prog.hermitian(f"R{i}", V.shape[1])
            prog.add_psd(f"R{i}", R)
            prog.add_psd(f"s{i}-R{i}", s[i] * np.eye(V.shape[1]) - R)
            term = term + V @ R @ V.conj().T
        normalization = normalization + term
    prog.add_equal("normalization", normalization, np.eye(dB))
    if total is not None:
        prog.add_equal("sum_s", s.sum(), total)
    prog.maximize(s.sum().real)
    return prog


def upsilon_cq_primal(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    return _upsilon_cq_program(K).solve(options, backend)


def upsilon_cq_dual(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    """min tr T  s.t.  W_i ≥ 0,  V_i†TV_i + W_i ≥ 0,  tr(TP_i) − tr W_i ≥ 1."""
    prog = LmiProgram(f"upsilon_cq_dual[{K.name}]")
    T = prog.hermitian("T", K.d_B)
    for i, P_i in enumerate(K.cq):
        V = projector_basis(P_i, complement=True)
        weight = inner(P_i.entries, T).real
        if V.shape[1]:
            W = prog.hermitian(f"W{i}", V.shape[1])
            prog.add_psd(f"W{i}", W)
            prog.add_psd(f"VTV{i}", V.conj().T @ T @ V + W)
            weight = weight - W.trace().real
        prog.add_nonneg(f"weight{i}", weight - 1.0)
    prog.minimize(T.trace().real)
    return prog.solve(options, backend)


def cq_witness_to_full(K: NCGraph, res: LmiResult) -> tuple[HermitianMatrix, HermitianMatrix]:
    """S = diag(s), E = Σ_i |i⟩⟨i| ⊗ (s_i P_i + R_i) from a cq solution."""
    s = np.asarray(res["s"], dtype=float)
    blocks = []
    for i, P_i in enumerate(K.cq):
        block = s[i] * P_i.entries
        if f"R{i}" in res.variables:
            V = projector_basis(P_i, complement=True)
            block = block + V @ res[f"R{i}"].entries @ V.conj().T
        blocks.append(block)
    S = HermitianMatrix(np.diag(s), (K.d_A,))
    E = HermitianMatrix(block_diag(*blocks), (K.d_A, K.d_B))
    return S, E


# ── Public API ──────────────────────────────────────────────────────────
def upsilon(
    K: NCGraph,
    use_cq: bool = True,
    options: Optional[SolveOptions] = None,
    backend=None,
) -> QuantityResult:
    """Υ(K); cq-graphs go through the reduced program unless use_cq is False."""
    if use_cq and K.is_cq:
        primal = upsilon_cq_primal(K, options, backend)
        dual = upsilon_cq_dual(K, options, backend)
        path = "cq"
    else:
        primal = upsilon_primal(K, options, backend)
        dual = upsilon_dual(K, options, backend)
        path = "full"
    return combine("upsilon", primal, dual, FLOOR, K.name, options, notes={"path": path})


def upsilon_witness(
    K: NCGraph,
    M: int,
    options: Optional[SolveOptions] = None,
    backend=None,
) -> tuple[HermitianMatrix, HermitianMatrix]:
    """
    A feasible (S, E) of the Υ program with tr S = M exactly. Used to build
    M-message codes; InfeasibleRequest when M exceeds Υ(K).
    """
    best = (upsilon_cq_primal if K.is_cq else upsilon_primal)(K, options, backend)
    if acceptable(best, options) and M > best.value + INTEGER_TAG_TOL:
        raise InfeasibleRequest(f"{M} messages exceed Υ({K.name}) = {best.value:.8g}", M=M)

    if K.is_cq:
        res = _upsilon_cq_program(K, total=float(M)).solve(options, backend)
    else:
        res = _upsilon_program(K, trace_S=float(M)).solve(options, backend)

    if res.status == INFEASIBLE:
        raise InfeasibleRequest(f"{M} messages exceed the assisted independence number of {K.name}", M=M)
    if not acceptable(res, options):
        raise SolverError(f"re-solve of Υ({K.name}) with tr S = {M} ended with status {res.status}", M=M)

    if K.is_cq:
        return cq_witness_to_full(K, res)
    return res["S"].with_factors((K.d_A,)), res["E"].with_factors((K.d_A, K.d_B))


def upsilon_with_noiseless(
    K: NCGraph,
    ell: int,
    options: Optional[SolveOptions] = None,
    backend=None,
) -> QuantityResult:
    """
    Υ(K⊗Δ_ℓ) alongside ℓ·Υ(K). Supermultiplicativity gives ≥; whether
    equality always holds is unknown, so the ratio is only reported.
    """
    base = upsilon(K, options=options, backend=backend)
    joint = upsilon(K.tensor(noiseless_classical(ell)), options=options, backend=backend)
    ratio = joint.value / (ell * base.value) if base.value else float("nan")
    joint.quantity = "upsilon_with_noiseless"
    joint.notes.update({"ell": ell, "upsilon_K": base.value, "ratio": ratio})
    logger.info(f"Υ({K.name}⊗Δ_{ell}) / ({ell}·Υ({K.name})) = {ratio:.8f}")
    return joint
