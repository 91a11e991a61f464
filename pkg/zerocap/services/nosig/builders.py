"""
zerocap/services/nosig/builders.py: explicit correlations from the capacity and cost programs.

Code for M messages through a graph K, ports [M_a, A, B, M_b]:

    Ω = (1/M) D ⊗ E + (1/M)(1 − D) ⊗ F,   F = (S⊗1 − E)/(M − 1)

with D = Σ_m |mm⟩⟨mm| and (S, E) feasible for Υ with tr S = M. Simulation
of a channel N with M messages, ports [A, M_a, M_b, B]:

    Ω = (1/M) D ⊗ J + (1/M)(1 − D) ⊗ F,   F = (1⊗T' − J)/(M − 1)

with J ≤ 1⊗T' and tr T' = M.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from zerocap.utils.constants import INTEGER_TAG_TOL
from zerocap.utils.errors import InfeasibleRequest, SolverError
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import HermitianMatrix, kron_perm, min_eigenvalue
from zerocap.services.model import Channel, NCGraph
from zerocap.services.sdp import SolveOptions
from zerocap.services.quantities import acceptable, sigma_channel_primal, upsilon_witness
from zerocap.services.nosig.correlation import NsCorrelation

logger = setup_logging(__name__)


def _message_diagonal(M: int) -> tuple[HermitianMatrix, HermitianMatrix]:
    """D = Σ_m |mm⟩⟨mm| and 1 − D on M_a ⊗ M_b."""
    d = np.zeros(M * M)
    d[np.arange(M) * M + np.arange(M)] = 1.0
    return HermitianMatrix(np.diag(d), (M, M)), HermitianMatrix(np.diag(1.0 - d), (M, M))


def build_capacity_ns(
    K: NCGraph,
    M: int,
    options: Optional[SolveOptions] = None,
    backend=None,
) -> NsCorrelation:
    """
    Zero-error code for M messages. The witness comes from the conjugate
    graph so that the error weight tr F J̄ vanishes for every channel with
    Kraus space inside K. M = 1 gives the trivial code Ω = ρ ⊗ 1_B.
    """
    if M < 1:
        raise InfeasibleRequest(f"a code needs at least one message, got M={M}", M=M)
    S, E = upsilon_witness(K.conjugate(), M, options, backend)
    dA, dB = K.d_A, K.d_B

    if M == 1:
        omega = HermitianMatrix(np.kron(S.entries / S.trace(), np.eye(dB)), (1, dA, dB, 1))
        logger.info(f"{K.name}: single message, trivial correlation")
        return NsCorrelation(omega, (1, dA, dB, 1), name=f"code[{K.name},M=1]", witnesses={"S": S, "E": omega})

    F = HermitianMatrix((np.kron(S.entries, np.eye(dB)) - E.entries) / (M - 1), (dA, dB), tol=1e-7)
    D, offD = _message_diagonal(M)
    # (M_a, M_b, A, B) → (M_a, A, B, M_b)
    omega = (kron_perm([D, E], [0, 2, 3, 1]).entries + kron_perm([offD, F], [0, 2, 3, 1]).entries) / M
    corr = NsCorrelation(
        omega,
        (M, dA, dB, M),
        classical_ports=(True, False, False, True),
        name=f"code[{K.name},M={M}]",
        witnesses={"S": S, "E": E, "F": F},
    )
    logger.info(f"{K.name}: built {M}-message code correlation")
    return corr


def build_simulation_ns(
    N: Channel,
    M: int,
    options: Optional[SolveOptions] = None,
    backend=None,
) -> NsCorrelation:
    """Exact simulation of N from M noiseless messages; M must reach Σ(N)."""
    J = N.choi
    dA, dB = N.d_in, N.d_out

    if M < 1:
        raise InfeasibleRequest(f"a simulation needs at least one message, got M={M}", M=M)
    if M == 1:
        if not N.is_constant():
            raise InfeasibleRequest(f"{N.name} is not constant; one message cannot simulate it", M=M)
        return NsCorrelation(J.entries, (dA, 1, 1, dB), name=f"sim[{N.name},M=1]")

    res = sigma_channel_primal(N, options, backend)
    if not acceptable(res, options):
        raise SolverError(f"Σ({N.name}) solve ended with status {res.status}")
    cost = res.value
    if M < cost - INTEGER_TAG_TOL:
        raise InfeasibleRequest(
            f"{M} messages are below the simulation cost {cost:.6f} of {N.name} (need {math.ceil(cost - INTEGER_TAG_TOL)})",
            M=M,
        )

    T = res["T"].entries
    slack = min_eigenvalue(HermitianMatrix(np.kron(np.eye(dA), T) - J.entries))
    if slack < 0 and np.trace(T).real - slack * dB <= M:
        T = T - slack * np.eye(dB)
    T_pad = T + ((M - np.trace(T).real) / dB) * np.eye(dB)
    F = HermitianMatrix((np.kron(np.eye(dA), T_pad) - J.entries) / (M - 1), (dA, dB), tol=1e-7)

    D, offD = _message_diagonal(M)
    # (M_a, M_b, A, B) → (A, M_a, M_b, B)
    omega = (kron_perm([D, J], [2, 0, 1, 3]).entries + kron_perm([offD, F], [2, 0, 1, 3]).entries) / M
    corr = NsCorrelation(
        omega,
        (dA, M, M, dB),
        classical_ports=(False, True, True, False),
        name=f"sim[{N.name},M={M}]",
        witnesses={"T": HermitianMatrix(T_pad), "F": F, "gamma": HermitianMatrix(T_pad / M)},
    )
    logger.info(f"{N.name}: built {M}-message simulation correlation (cost {cost:.6f})")
    return corr
