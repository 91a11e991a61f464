"""
zerocap/services/quantities/simulation.py: one-shot simulation costs.

Σ(N) = 2^(−Hmin(A|B)_J) is the number of noiseless messages that, with
no-signalling assistance, simulate the channel N exactly. Σ(K) is the
same cost for the cheapest channel with Kraus space inside K.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import projector_basis
from zerocap.services.model import Channel, NCGraph
from zerocap.services.sdp import LmiProgram, LmiResult, SolveOptions, inner, kron, partial_trace
from zerocap.services.quantities.results import CEIL, QuantityResult, combine

logger = setup_logging(__name__)


# ── Channel cost ────────────────────────────────────────────────────────
def sigma_channel_primal(N: Channel, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    """min tr T  s.t.  J ≤ 1⊗T."""
    J = N.choi
    prog = LmiProgram(f"sigma_channel[{N.name}]")
    T = prog.hermitian("T", N.d_out)
    prog.add_psd("1T-J", kron(np.eye(N.d_in), T) - J.entries)
    prog.minimize(T.trace().real)
    return prog.solve(options, backend)


def sigma_channel_dual(N: Channel, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    """max tr JY  s.t.  Y ≥ 0,  tr_A Y = 1_B."""
    J = N.choi
    prog = LmiProgram(f"sigma_channel_dual[{N.name}]")
    Y = prog.hermitian("Y", N.d_in * N.d_out)
    prog.add_psd("Y", Y)
    prog.add_equal("trA_Y", partial_trace(Y, (N.d_in, N.d_out), [1]), np.eye(N.d_out))
    prog.maximize(inner(J.entries, Y).real)
    return prog.solve(options, backend)


def sigma_channel(N: Channel, options: Optional[SolveOptions] = None, backend=None) -> QuantityResult:
    primal = sigma_channel_primal(N, options, backend)
    dual = sigma_channel_dual(N, options, backend)
    hmin = -math.log2(primal.value) if primal.value > 0 else math.nan
    return combine("sigma_channel", primal, dual, CEIL, N.name, options, notes={"hmin": hmin})


# ── Graph cost, full formulation ────────────────────────────────────────
def sigma_graph_primal(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    """min tr T  s.t.  0 ≤ F ≤ 1⊗T,  tr_B F = 1_A,  F supported on P."""
    dA, dB = K.d_A, K.d_B
    VP = K.range_basis()
    prog = LmiProgram(f"sigma_graph[{K.name}]")
    T = prog.hermitian("T", dB)
    Fr = prog.hermitian("F_range", VP.shape[1])
    F = VP @ Fr @ VP.conj().T
    prog.add_psd("F", Fr)
    prog.add_psd("1T-F", kron(np.eye(dA), T) - F)
    prog.add_equal("trB_F", partial_trace(F, (dA, dB), [0]), np.eye(dA))
    prog.minimize(T.trace().real)
    return prog.solve(options, backend)


def sigma_graph_dual(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    """max tr S  s.t.  E ≥ 0,  tr_A E = 1_B,  P(E − S⊗1)P ≥ 0."""
    dA, dB = K.d_A, K.d_B
    VP = K.range_basis()
    prog = LmiProgram(f"sigma_graph_dual[{K.name}]")
    S = prog.hermitian("S", dA)
    E = prog.hermitian("E", dA * dB)
    prog.add_psd("E", E)
    prog.add_equal("trA_E", partial_trace(E, (dA, dB), [1]), np.eye(dB))
    prog.add_psd("P(E-S1)P", VP.conj().T @ (E - kron(S, np.eye(dB))) @ VP)
    prog.maximize(S.trace().real)
    return prog.solve(options, backend)


# ── Graph cost, cq formulation ──────────────────────────────────────────
def sigma_graph_cq_primal(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    """min tr T  s.t.  T ≥ F_i ≥ 0,  tr F_i = 1,  F_i supported on P_i."""
    prog = LmiProgram(f"sigma_graph_cq[{K.name}]")
    T = prog.hermitian("T", K.d_B)
    for i, P_i in enumerate(K.cq):
        V = projector_basis(P_i)
        F = prog.hermitian(f"F{i}", V.shape[1])
        prog.add_psd(f"F{i}", F)
        prog.add_equal(f"trF{i}", F.trace(), 1.0)
        prog.add_psd(f"T-F{i}", T - V @ F @ V.conj().T)
    prog.minimize(T.trace().real)
    return prog.solve(options, backend)


def sigma_graph_cq_dual(K: NCGraph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    """max Σ s_i  s.t.  P_i E_i P_i ≥ s_i P_i,  E_i ≥ 0,  Σ_i E_i = 1."""
    n = len(K.cq)
    prog = LmiProgram(f"sigma_graph_cq_dual[{K.name}]")
    s = prog.real("s", n)
    total = 0
    for i, P_i in enumerate(K.cq):
        V = projector_basis(P_i)
        E = prog.hermitian(f"E{i}", K.d_B)
        prog.add_psd(f"E{i}", E)
        prog.add_psd(f"PEP{i}", V.conj().T @ E @ V - s[i] * np.eye(V.shape[1]))
        total = total + E
    prog.add_equal("sum_E", total, np.eye(K.d_B))
    prog.maximize(s.sum().real)
    return prog.solve(options, backend)


def sigma_graph(
    K: NCGraph,
    use_cq: bool = True,
    options: Optional[SolveOptions] = None,
    backend=None,
) -> QuantityResult:
    if use_cq and K.is_cq:
        primal = sigma_graph_cq_primal(K, options, backend)
        dual = sigma_graph_cq_dual(K, options, backend)
        path = "cq"
    else:
        primal = sigma_graph_primal(K, options, backend)
        dual = sigma_graph_dual(K, options, backend)
        path = "full"
    return combine("sigma_graph", primal, dual, CEIL, K.name, options, notes={"path": path})
