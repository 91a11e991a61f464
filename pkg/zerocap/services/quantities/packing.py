"""
zerocap/services/quantities/packing.py: semidefinite and fractional packing numbers.

    A(K)  = max tr S  s.t.  S ≥ 0,  tr_A P(S⊗1) ≤ 1_B
    Ã(K)  = max tr S  s.t.  S ≥ 0,  tr_A P(S⊗1)P ≤ 1_B
    Â(K)  = min_ρ λ_max(Σ_k E_k ρ E_k†)           with A·Â = 1
    α*(Γ) = max Σ_x p_x  s.t.  Σ_x p_x Γ(y|x) ≤ 1

log A(K) is the assisted zero-error capacity of a cq-graph; for classical
graphs all of them collapse to the fractional packing number α*.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Optional, Sequence, Union

import numpy as np
from scipy.optimize import linprog

from zerocap.utils.constants import LP_AGREEMENT_TOL, OPTIMAL
from zerocap.utils.errors import GraphError, SolverError
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import HermitianMatrix
from zerocap.services.model import NCGraph, bipartite_support
from zerocap.services.sdp import LmiProgram, LmiResult, SolveOptions, dot, inner, kron, partial_trace
from zerocap.services.quantities.results import NONE, QuantityResult, combine

logger = setup_logging(__name__)


# ── A(K) ────────────────────────────────────────────────────────────────
def aram_primal(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    dA, dB = K.d_A, K.d_B
    P = K.P.entries
    prog = LmiProgram(f"aram[{K.name}]")
    S = prog.hermitian("S", dA)
    X = kron(S, np.eye(dB))
    # tr_A P(S⊗1) is Hermitian already; the symmetrized form keeps round-off out
    load = partial_trace((P @ X + X @ P) / 2, (dA, dB), [1])
    prog.add_psd("S", S)
    prog.add_psd("1-trA_PS", np.eye(dB) - load)
    prog.maximize(S.trace().real)
    return prog.solve(options, backend)


def aram_dual(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    """min tr T  s.t.  T ≥ 0,  tr_B P(1⊗T) ≥ 1_A."""
    dA, dB = K.d_A, K.d_B
    P = K.P.entries
    prog = LmiProgram(f"aram_dual[{K.name}]")
    T = prog.hermitian("T", dB)
    Y = kron(np.eye(dA), T)
    prog.add_psd("T", T)
    prog.add_psd("trB_PT-1", partial_trace((P @ Y + Y @ P) / 2, (dA, dB), [0]) - np.eye(dA))
    prog.minimize(T.trace().real)
    return prog.solve(options, backend)


def aram_cq_primal(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    """max Σ s_i  s.t.  s ≥ 0,  Σ_i s_i P_i ≤ 1."""
    prog = LmiProgram(f"aram_cq[{K.name}]")
    s = prog.real("s", len(K.cq))
    prog.add_nonneg("s", s)
    prog.add_psd("1-sP", np.eye(K.d_B) - sum(s[i] * p.entries for i, p in enumerate(K.cq)))
    prog.maximize(s.sum().real)
    return prog.solve(options, backend)


def aram_cq_dual(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    """min tr T  s.t.  T ≥ 0,  tr(P_i T) ≥ 1."""
    prog = LmiProgram(f"aram_cq_dual[{K.name}]")
    T = prog.hermitian("T", K.d_B)
    prog.add_psd("T", T)
    for i, p in enumerate(K.cq):
        prog.add_nonneg(f"cover{i}", inner(p.entries, T).real - 1.0)
    prog.minimize(T.trace().real)
    return prog.solve(options, backend)


def aram(K: NCGraph, use_cq: bool = True, options: Optional[SolveOptions] = None, backend=None) -> QuantityResult:
    if use_cq and K.is_cq:
        primal, dual, path = aram_cq_primal(K, options, backend), aram_cq_dual(K, options, backend), "cq"
    else:
        primal, dual, path = aram_primal(K, options, backend), aram_dual(K, options, backend), "full"
    return combine("aram", primal, dual, NONE, K.name, options, notes={"path": path})


# ── Ã(K) ────────────────────────────────────────────────────────────────
def aram_tilde_primal(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    dA, dB = K.d_A, K.d_B
    P = K.P.entries
    prog = LmiProgram(f"aram_tilde[{K.name}]")
    S = prog.hermitian("S", dA)
    prog.add_psd("S", S)
    prog.add_psd("1-trA_PSP", np.eye(dB) - partial_trace(P @ kron(S, np.eye(dB)) @ P, (dA, dB), [1]))
    prog.maximize(S.trace().real)
    return prog.solve(options, backend)


def aram_tilde_dual(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    dA, dB = K.d_A, K.d_B
    P = K.P.entries
    prog = LmiProgram(f"aram_tilde_dual[{K.name}]")
    T = prog.hermitian("T", dB)
    prog.add_psd("T", T)
    prog.add_psd("trB_PTP-1", partial_trace(P @ kron(np.eye(dA), T) @ P, (dA, dB), [0]) - np.eye(dA))
    prog.minimize(T.trace().real)
    return prog.solve(options, backend)


def aram_tilde(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> QuantityResult:
    primal = aram_tilde_primal(K, options, backend)
    dual = aram_tilde_dual(K, options, backend)
    return combine("aram_tilde", primal, dual, NONE, K.name, options)


# ── Kraus-operator forms ────────────────────────────────────────────────
def _kraus_ops(K: NCGraph, kraus: Optional[Sequence[np.ndarray]]) -> list[np.ndarray]:
    ops = list(kraus) if kraus is not None else K.kraus_basis()
    if not ops:
        raise GraphError(f"{K.name}: no Kraus operators")
    return [np.asarray(e, dtype=complex) for e in ops]


def aram_kraus(
    K: NCGraph,
    kraus: Optional[Sequence[np.ndarray]] = None,
    options: Optional[SolveOptions] = None,
    backend=None,
) -> QuantityResult:
    """A(K) as max tr R s.t. R ≥ 0, Σ E_k R E_k† ≤ 1, with the orthonormal Kraus basis by default."""
    ops = _kraus_ops(K, kraus)
    dA, dB = K.d_A, K.d_B

    prog = LmiProgram(f"aram_kraus[{K.name}]")
    R = prog.hermitian("R", dA)
    prog.add_psd("R", R)
    prog.add_psd("1-ERE", np.eye(dB) - sum(e @ R @ e.conj().T for e in ops))
    prog.maximize(R.trace().real)
    primal = prog.solve(options, backend)

    dprog = LmiProgram(f"aram_kraus_dual[{K.name}]")
    T = dprog.hermitian("T", dB)
    dprog.add_psd("T", T)
    dprog.add_psd("ETE-1", sum(e.conj().T @ T @ e for e in ops) - np.eye(dA))
    dprog.minimize(T.trace().real)
    dual = dprog.solve(options, backend)
    return combine("aram_kraus", primal, dual, NONE, K.name, options)


def aram_hat(
    K: NCGraph,
    kraus: Optional[Sequence[np.ndarray]] = None,
    options: Optional[SolveOptions] = None,
    backend=None,
) -> QuantityResult:
    """
    Â(K) = min t s.t. Σ E_k ρ E_k† ≤ t·1, ρ a state; the dual program
    max_σ λ_min(Σ E_k†σE_k) is the handle value of the representation.
    """
    ops = _kraus_ops(K, kraus)
    dA, dB = K.d_A, K.d_B

    prog = LmiProgram(f"aram_hat[{K.name}]")
    rho = prog.hermitian("rho", dA)
    t = prog.real("t")
    prog.add_psd("rho", rho)
    prog.add_equal("tr_rho", rho.trace(), 1.0)
    prog.add_psd("t-ErhoE", t * np.eye(dB) - sum(e @ rho @ e.conj().T for e in ops))
    prog.minimize(t)
    primal = prog.solve(options, backend)

    dprog = LmiProgram(f"aram_hat_dual[{K.name}]")
    sigma = dprog.hermitian("sigma", dB)
    u = dprog.real("u")
    dprog.add_psd("sigma", sigma)
    dprog.add_equal("tr_sigma", sigma.trace(), 1.0)
    dprog.add_psd("EsigmaE-u", sum(e.conj().T @ sigma @ e for e in ops) - u * np.eye(dA))
    dprog.maximize(u)
    dual = dprog.solve(options, backend)
    return combine("aram_hat", primal, dual, NONE, K.name, options)


def aram_product(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> tuple[QuantityResult, QuantityResult, float]:
    """A(K), Â(K) and their product, which is 1 for every K."""
    a = aram(K, options=options, backend=backend)
    h = aram_hat(K, options=options, backend=backend)
    product = a.value * h.value
    a.notes["aram_hat"] = h.value
    a.notes["aram_product"] = product
    return a, h, product


def or_value(projectors: Sequence, options: Optional[SolveOptions] = None, backend=None) -> QuantityResult:
    """η({P_i}) = max_σ min_i tr P_iσ, through Â of the cq-graph i → P_i."""
    K = NCGraph.from_cq([p if isinstance(p, HermitianMatrix) else HermitianMatrix(p) for p in projectors], name="OR")
    res = aram_hat(K, options=options, backend=backend)
    res.quantity = "or_value"
    return res


# ── α*(Γ) ───────────────────────────────────────────────────────────────
def _support(graph: Union[NCGraph, np.ndarray, Sequence]) -> np.ndarray:
    """0/1 matrix Γ[x, y] from a classical NCGraph, a transition matrix or an adjacency."""
    if isinstance(graph, NCGraph):
        gamma = bipartite_support(graph)
    else:
        gamma = (np.asarray(graph, dtype=float) > 0).astype(float)
    if gamma.ndim != 2 or gamma.size == 0:
        raise GraphError("bipartite graph must be a non-empty 2-D incidence matrix")
    isolated = np.flatnonzero(gamma.sum(axis=1) == 0)
    if isolated.size:
        raise GraphError(f"input {int(isolated[0])} has no outgoing edge", factor=int(isolated[0]))
    return gamma


def fractional_packing_lp(gamma: np.ndarray) -> float:
    """α* by the HiGHS simplex, as an independent check of the diagonal programs."""
    nx, ny = gamma.shape
    res = linprog(-np.ones(nx), A_ub=gamma.T, b_ub=np.ones(ny), bounds=[(0.0, 1.0)] * nx, method="highs")
    if res.status != 0:
        raise SolverError(f"linprog failed on the packing LP: {res.message}")
    return float(-res.fun)


def fractional_packing(
    graph: Union[NCGraph, np.ndarray, Sequence],
    options: Optional[SolveOptions] = None,
    backend=None,
) -> QuantityResult:
    """
    Packing LP  max Σ p_x, Σ_x p_x Γ(y|x) ≤ 1, 0 ≤ p ≤ 1  and covering LP
    min Σ q_y, Σ_y q_y Γ(y|x) ≥ 1, q ≥ 0, as diagonal programs.
    """
    gamma = _support(graph)
    nx, ny = gamma.shape
    # LP_AGREEMENT_TOL is absolute, tighter than the solver's relative gap
    base = options or SolveOptions()
    options = replace(
        base,
        gap_tol=min(base.gap_tol, LP_AGREEMENT_TOL / 10),
        feas_tol=min(base.feas_tol, LP_AGREEMENT_TOL / 10),
    )

    prog = LmiProgram("alpha_star")
    p = prog.real("p", nx)
    prog.add_nonneg("p", p)
    prog.add_nonneg("1-p", np.ones(nx) - p)
    prog.add_nonneg("pack", np.ones(ny) - gamma.T @ p)
    prog.maximize(dot(np.ones(nx), p).real)
    primal = prog.solve(options, backend)

    dprog = LmiProgram("alpha_star_cover")
    q = dprog.real("q", ny)
    dprog.add_nonneg("q", q)
    dprog.add_nonneg("cover", gamma @ q - np.ones(nx))
    dprog.minimize(dot(np.ones(ny), q).real)
    dual = dprog.solve(options, backend)

    simplex = fractional_packing_lp(gamma)
    name = graph.name if isinstance(graph, NCGraph) else f"Γ[{nx}x{ny}]"
    res = combine("alpha_star", primal, dual, NONE, name, options, notes={"simplex": simplex})
    res.tolerance = LP_AGREEMENT_TOL
    res.crosschecks["simplex"] = abs(res.value - simplex)
    if res.status == OPTIMAL and not res.ok:
        logger.warning(
            f"α*[{name}]: packing {res.primal_value:.12g}, covering {res.dual_value:.12g} and simplex "
            f"{simplex:.12g} disagree beyond {LP_AGREEMENT_TOL:g}"
        )
    return res
