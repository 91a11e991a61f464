"""
zerocap/services/nosig/verify.py: end-to-end checks of built correlations.

A code is verified by composing its correlation with the channel and reading
the message transition matrix; a simulation by composing with the noiseless
M-message channel and comparing Choi matrices.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from zerocap.utils.constants import NS_TOL
from zerocap.utils.errors import DimensionError
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import HermitianMatrix, partial_trace
from zerocap.services.model import Channel, NCGraph, identity_channel
from zerocap.services.sdp import SolveOptions
from zerocap.services.nosig.builders import build_capacity_ns, build_simulation_ns
from zerocap.services.nosig.compose import compose_choi, compose_via_trace
from zerocap.services.nosig.correlation import NsCorrelation, NsReport, check_ns

logger = setup_logging(__name__)

# Zero-error and exact-simulation thresholds of the end-to-end reports
CODE_TOL = 1e-6
SIMULATION_TOL = 1e-6


def tp_deviation(C: HermitianMatrix, d_in: int, d_out: int) -> float:
    """max |tr_B C − 1_A| of a composed Choi matrix."""
    marginal = partial_trace(C.with_factors((d_in, d_out)), [0]).entries
    return float(np.abs(marginal - np.eye(d_in)).max())


@dataclass
class CodeReport:
    graph: str
    M: int
    ns: NsReport
    transition: np.ndarray
    max_offdiag: float
    choi_distance: float
    orthogonality: float
    trace_form_distance: float
    seconds: float = 0.0
    notes: dict = field(default_factory=dict)
    correlation: Optional[NsCorrelation] = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return (
            self.ns.ok
            and self.max_offdiag <= CODE_TOL
            and self.choi_distance <= CODE_TOL
            and self.orthogonality <= CODE_TOL
        )

    def as_dict(self) -> dict:
        return {
            "kind": "code",
            "graph": self.graph,
            "M": self.M,
            "ok": self.ok,
            "ns": self.ns.as_dict(),
            "max_offdiag": self.max_offdiag,
            "choi_distance": self.choi_distance,
            "orthogonality": self.orthogonality,
            "trace_form_distance": self.trace_form_distance,
            "transition": self.transition.tolist(),
            "seconds": self.seconds,
            **self.notes,
        }


@dataclass
class SimulationReport:
    channel: str
    M: int
    ns: NsReport
    choi_distance: float
    tp_deviation: float
    seconds: float = 0.0
    notes: dict = field(default_factory=dict)
    correlation: Optional[NsCorrelation] = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.ns.ok and self.choi_distance <= SIMULATION_TOL

    def as_dict(self) -> dict:
        return {
            "kind": "simulation",
            "channel": self.channel,
            "M": self.M,
            "ok": self.ok,
            "ns": self.ns.as_dict(),
            "choi_distance": self.choi_distance,
            "tp_deviation": self.tp_deviation,
            "seconds": self.seconds,
            **self.notes,
        }


def verify_code(
    K: NCGraph,
    N: Channel,
    M: int,
    options: Optional[SolveOptions] = None,
    backend=None,
) -> CodeReport:
    t0 = time.perf_counter()
    if (N.d_in, N.d_out) != (K.d_A, K.d_B):
        raise DimensionError(f"{N.name} is {N.d_in}→{N.d_out} but {K.name} is {K.d_A}→{K.d_B}")
    outside = float(np.abs(K.Q.entries @ N.choi.entries).max())
    if outside > 1e-7:
        logger.warning(f"{N.name} has Kraus weight {outside:.2e} outside {K.name}; the code is not guaranteed")

    corr = build_capacity_ns(K, M, options, backend)
    ns = check_ns(corr, tol=NS_TOL * 10)
    C = compose_choi(corr, N)
    t = C.entries.reshape(M, M, M, M)
    transition = np.real(np.einsum("mpmp->mp", t))
    offdiag = transition - np.diag(np.diag(transition))
    target = np.zeros((M * M, M * M))
    target[np.arange(M) * M + np.arange(M), np.arange(M) * M + np.arange(M)] = 1.0

    F = corr.witnesses.get("F")
    orth = abs(complex(np.sum(F.entries * N.choi.entries))) if F is not None else 0.0
    via_trace = compose_via_trace(corr, N)

    report = CodeReport(
        graph=K.name,
        M=M,
        ns=ns,
        transition=transition,
        max_offdiag=float(np.abs(offdiag).max()) if M > 1 else 0.0,
        choi_distance=float(np.abs(C.entries - target).max()),
        orthogonality=orth,
        trace_form_distance=float(np.abs(via_trace.entries - C.entries).max()),
        seconds=time.perf_counter() - t0,
        notes={"trivial": M == 1, "kraus_outside": outside},
        correlation=corr,
    )
    level = logger.info if report.ok else logger.warning
    level(f"{K.name}, M={M}: code verified={report.ok} offdiag={report.max_offdiag:.2e} orth={orth:.2e}")
    return report


def verify_simulation(
    N: Channel,
    M: int,
    options: Optional[SolveOptions] = None,
    backend=None,
) -> SimulationReport:
    t0 = time.perf_counter()
    corr = build_simulation_ns(N, M, options, backend)
    ns = check_ns(corr, tol=NS_TOL * 10)
    C = compose_choi(corr, identity_channel(M))
    report = SimulationReport(
        channel=N.name,
        M=M,
        ns=ns,
        choi_distance=float(np.abs(C.entries - N.choi.entries).max()),
        tp_deviation=tp_deviation(C, N.d_in, N.d_out),
        seconds=time.perf_counter() - t0,
        notes={"trivial": M == 1},
        correlation=corr,
    )
    level = logger.info if report.ok else logger.warning
    level(f"{N.name}, M={M}: simulation verified={report.ok} distance={report.choi_distance:.2e}")
    return report


# ── Signalling counterexample ───────────────────────────────────────────
def signalling_correlation() -> NsCorrelation:
    """Box that hands Bob's input bit y to Alice's output a; it signals B → A."""
    Q = np.zeros((1, 2, 2, 2))
    for y in range(2):
        Q[0, y, y, 0] = 1.0
    return NsCorrelation.from_classical_box(Q, name="loopback")


def signalling_witness(corr: NsCorrelation) -> tuple[float, Optional[Channel]]:
    """
    Largest TP violation of the composition over the noiseless bit and the
    bit flip between A_o and B_i. Returns (deviation, channel reaching it).
    """
    _, dAo, dBi, _ = corr.dims
    if dAo != 2 or dBi != 2:
        raise DimensionError(f"witness search runs over one-bit links, {corr.name} has {dAo}→{dBi}")
    flip = np.array([[0.0, 1.0], [1.0, 0.0]])
    candidates = [identity_channel(2), Channel([flip], 2, 2, name="bitflip")]
    best, worst_channel = 0.0, None
    for N in candidates:
        dev = tp_deviation(compose_choi(corr, N), corr.dims[0], corr.dims[3])
        if dev > best:
            best, worst_channel = dev, N
    if worst_channel is not None:
        logger.info(f"{corr.name}: composing with {worst_channel.name} breaks trace preservation by {best:.3e}")
    return best, worst_channel
