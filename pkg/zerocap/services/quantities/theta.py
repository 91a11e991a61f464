"""Lovász number ϑ(G), the least assisted zero-error capacity (in log) over cq-graphs with confusability graph G."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from zerocap.utils.errors import GraphError
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import HermitianMatrix
from zerocap.services.model import Graph, NCGraph, confusability_graph
from zerocap.services.sdp import LmiProgram, LmiResult, SolveOptions, inner
from zerocap.services.quantities.packing import aram
from zerocap.services.quantities.results import NONE, QuantityResult, combine

logger = setup_logging(__name__)


def theta_primal(G: Graph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    """max tr(JX)  s.t.  X ≥ 0,  tr X = 1,  X_ij = 0 on edges."""
    prog = LmiProgram(f"theta[n={G.n}]")
    X = prog.hermitian("X", G.n)
    prog.add_psd("X", X)
    prog.add_equal("trX", X.trace(), 1.0)
    for i, j in sorted(G.edges):
        prog.add_equal(f"edge{i}_{j}", X[i, j])
    prog.maximize(inner(np.ones((G.n, G.n)), X).real)
    return prog.solve(options, backend)


def theta_dual(G: Graph, options: Optional[SolveOptions] = None, backend=None) -> LmiResult:
    """min t  s.t.  t·1 + Σ_{ij∈E} y_ij(E_ij + E_ji) − J ≥ 0."""
    n = G.n
    prog = LmiProgram(f"theta_dual[n={n}]")
    t = prog.real("t")
    slack = t * np.eye(n) - np.ones((n, n))
    edges = sorted(G.edges)
    if edges:
        y = prog.real("y", len(edges))
        for k, (i, j) in enumerate(edges):
            e = np.zeros((n, n))
            e[i, j] = e[j, i] = 1.0
            slack = slack + y[k] * e
    prog.add_psd("Z", slack)
    prog.minimize(t)
    return prog.solve(options, backend)


def lovasz_theta(
    G: Graph,
    representation: Optional[Sequence] = None,
    options: Optional[SolveOptions] = None,
    backend=None,
) -> QuantityResult:
    """
    ϑ(G) by its primal and dual programs. When an orthogonal representation
    (one vector per vertex, orthogonal on non-edges) is supplied, A(K) of its
    cq-graph is reported next to ϑ; for the umbrella of an odd cycle the two
    coincide.
    """
    if G.n < 1:
        raise GraphError("ϑ needs at least one vertex")
    primal = theta_primal(G, options, backend)
    dual = theta_dual(G, options, backend)
    notes = {}
    if representation is not None:
        K = NCGraph.from_cq([HermitianMatrix.from_vector(v, normalize=True) for v in representation], name="OR")
        conf = confusability_graph(K)
        if conf.n != G.n or not conf.edges <= G.edges:
            raise GraphError("supplied vectors are not an orthogonal representation of the graph")
        rep = aram(K, options=options, backend=backend)
        notes = {"representation_aram": rep.value, "representation_gap": abs(rep.value - primal.value)}
        logger.info(f"ϑ = {primal.value:.8f}, A(representation) = {rep.value:.8f}")
    return combine("theta", primal, dual, NONE, f"G[n={G.n},m={len(G.edges)}]", options, notes=notes)
