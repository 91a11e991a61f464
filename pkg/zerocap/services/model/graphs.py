"""
zerocap/services/model/graphs.py: non-commutative bipartite graphs and classical graphs.

An NCGraph is the support projector P on A⊗B of a Kraus operator space
K ⊆ L(A, B): P = Σ_i (1⊗E_i)|Φ⟩⟨Φ|(1⊗E_i)† for an orthonormal basis {E_i}
(trace inner product). cq-graphs additionally keep the block projectors
P_i, with P = Σ_i |i⟩⟨i| ⊗ P_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.linalg import orth

from zerocap.utils.config import settings
from zerocap.utils.constants import ORTHOGONALITY_TOL, PROJECTOR_TOL
from zerocap.utils.errors import CapacityLimitError, DimensionError, GraphError
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import (
    HermitianMatrix,
    is_projector,
    kron_perm,
    partial_trace,
    projector_basis,
)
from zerocap.services.model.channels import _as_kraus, choi_vector

logger = setup_logging(__name__)


# ── Non-commutative bipartite graphs ─────────────────────────────────────
class NCGraph:
    def __init__(
        self,
        P: HermitianMatrix,
        d_A: int,
        d_B: int,
        cq: Optional[Sequence[HermitianMatrix]] = None,
        name: Optional[str] = None,
    ):
        if P.dim != d_A * d_B:
            raise DimensionError(f"projector of dim {P.dim} does not live on {d_A}⊗{d_B}")
        if not is_projector(P, PROJECTOR_TOL):
            raise GraphError("support operator is not a projector")
        self.P = P.with_factors((d_A, d_B))
        self.d_A = int(d_A)
        self.d_B = int(d_B)
        self.cq = tuple(cq) if cq is not None else None
        self.name = name or f"K[{d_A}->{d_B}]"

    def __repr__(self) -> str:
        kind = "cq" if self.is_cq else "general"
        return f"NCGraph({self.name}, d_A={self.d_A}, d_B={self.d_B}, rank={self.rank}, {kind})"

    # ── Constructors ─────────────────────────────────────────────────────
    @classmethod
    def from_kraus(
        cls,
        kraus: Iterable,
        d_in: Optional[int] = None,
        d_out: Optional[int] = None,
        name: Optional[str] = None,
    ) -> "NCGraph":
        """Span of the given operators; orthonormalized before P is formed."""
        ops, d_in, d_out = _as_kraus(kraus, d_in, d_out)
        vecs = np.array([choi_vector(k) for k in ops]).T
        basis = orth(vecs, rcond=settings.RANK_TOL)
        if basis.shape[1] == 0:
            raise GraphError("Kraus operators span the zero space")
        return cls(HermitianMatrix(basis @ basis.conj().T, (d_in, d_out)), d_in, d_out, name=name)

    @classmethod
    def from_cq(cls, projectors: Sequence, name: Optional[str] = None) -> "NCGraph":
        """cq-graph i → P_i; every entry must be a nonzero projector on the same space."""
        if not projectors:
            raise GraphError("empty cq projector list")
        blocks = []
        for i, p in enumerate(projectors):
            p = p if isinstance(p, HermitianMatrix) else HermitianMatrix(p)
            if not is_projector(p, PROJECTOR_TOL):
                raise GraphError(f"cq entry {i} is not a projector", factor=i)
            if p.trace() < 0.5:
                raise GraphError(f"cq entry {i} is the zero projector", factor=i)
            blocks.append(p.with_factors((p.dim,)))
        d_B = blocks[0].dim
        if any(b.dim != d_B for b in blocks):
            raise DimensionError("cq projectors act on different output spaces")
        n = len(blocks)
        P = np.zeros((n * d_B, n * d_B), dtype=complex)
        for i, b in enumerate(blocks):
            P[i * d_B:(i + 1) * d_B, i * d_B:(i + 1) * d_B] = b.entries
        return cls(HermitianMatrix(P, (n, d_B)), n, d_B, cq=blocks, name=name)

    # ── Structure ────────────────────────────────────────────────────────
    @property
    def is_cq(self) -> bool:
        return self.cq is not None

    @property
    def rank(self) -> int:
        return int(round(self.P.trace()))

    @property
    def Q(self) -> HermitianMatrix:
        """1 − P."""
        return HermitianMatrix(np.eye(self.P.dim) - self.P.entries, (self.d_A, self.d_B))

    def range_basis(self, complement: bool = False) -> np.ndarray:
        return projector_basis(self.P, complement=complement)

    def kraus_basis(self) -> list[np.ndarray]:
        """Orthonormal Kraus operators E_k (d_B × d_A) spanning K, from the eigenvectors of P."""
        v = self.range_basis()
        return [v[:, k].reshape(self.d_A, self.d_B).T for k in range(v.shape[1])]

    def trace_A(self) -> HermitianMatrix:
        return partial_trace(self.P, [1])

    def conjugate(self) -> "NCGraph":
        cq = [p.conj() for p in self.cq] if self.cq is not None else None
        return NCGraph(self.P.conj(), self.d_A, self.d_B, cq=cq, name=f"conj({self.name})")

    def same_as(self, other: "NCGraph", atol: float = 1e-9) -> bool:
        return (self.d_A, self.d_B) == (other.d_A, other.d_B) and self.P.allclose(other.P.entries, atol)

    # ── Tensor products ──────────────────────────────────────────────────
    def tensor(self, other: "NCGraph") -> "NCGraph":
        d_A, d_B = self.d_A * other.d_A, self.d_B * other.d_B
        if d_A * d_B > settings.MAX_STATE_DIM:
            raise CapacityLimitError(
                f"tensor product state space {d_A}·{d_B} = {d_A * d_B} exceeds {settings.MAX_STATE_DIM}"
            )
        P = kron_perm([self.P, other.P], [0, 2, 1, 3]).with_factors((d_A, d_B))
        cq = None
        if self.is_cq and other.is_cq:
            cq = [p.kron(q).with_factors((p.dim * q.dim,)) for p in self.cq for q in other.cq]
        return NCGraph(P, d_A, d_B, cq=cq, name=f"{self.name}⊗{other.name}")

    def power(self, n: int) -> "NCGraph":
        if n < 1:
            raise DimensionError(f"tensor power must be at least 1, got {n}")
        if n > settings.MAX_TENSOR_POWER:
            raise CapacityLimitError(f"tensor power {n} exceeds the cap {settings.MAX_TENSOR_POWER}")
        out = self
        for _ in range(n - 1):
            out = out.tensor(self)
        if n > 1:
            out.name = f"{self.name}^{n}"
        return out


def is_extremal(K: NCGraph, tol: float = 1e-9) -> bool:
    """
    Whether {E_i†E_j} is linearly independent. Then exactly one channel has
    Kraus space K, and the graph cost equals that channel's cost.
    """
    ops = K.kraus_basis()
    prods = np.array([(a.conj().T @ b).ravel() for a in ops for b in ops])
    s = np.linalg.svd(prods, compute_uv=False)
    return bool(s.size and s[-1] > tol * s[0] and prods.shape[0] <= prods.shape[1])


# ── Classical graphs ─────────────────────────────────────────────────────
@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"vertex count must be nonnegative, got {self.n}")
        clean = set()
        for e in self.edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise GraphError(f"edge {(i, j)} outside vertex range [0, {self.n})")
            clean.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(clean))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, frozenset(combinations(range(n), 2)))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, frozenset())

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise GraphError(f"a cycle needs at least 3 vertices, got {n}")
        return cls(n, frozenset((i, (i + 1) % n) for i in range(n)))

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=int)
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1
        return a

    def complement(self) -> "Graph":
        all_pairs = set(combinations(range(self.n), 2))
        return Graph(self.n, frozenset(all_pairs - set(self.edges)))

    def strong_product(self, other: "Graph") -> "Graph":
        """(i,k) ~ (j,l) iff (i = j or i~j) and (k = l or k~l), excluding equality; vertex (i,k) ↦ i·m + k."""
        m = other.n
        edges = set()
        for u in range(self.n * m):
            for v in range(u + 1, self.n * m):
                i, k = divmod(u, m)
                j, l = divmod(v, m)
                if (i == j or self.has_edge(i, j)) and (k == l or other.has_edge(k, l)):
                    edges.add((u, v))
        return Graph(self.n * m, frozenset(edges))


def confusability_graph(K: NCGraph, tol: float = ORTHOGONALITY_TOL) -> Graph:
    """Edge {i, j} iff the output supports P_i, P_j are not orthogonal."""
    if not K.is_cq:
        raise GraphError(f"{K.name} has no cq decomposition")
    edges = []
    for i, j in combinations(range(len(K.cq)), 2):
        if np.linalg.norm(K.cq[i].entries @ K.cq[j].entries, 2) > tol:
            edges.append((i, j))
    return Graph.from_edges(len(K.cq), edges)


def bipartite_support(K: NCGraph) -> np.ndarray:
    """Γ(y|x) ∈ {0,1} for a classical graph: rank-1 diagonal cq projectors P_x = Σ_{y∈Γ(x)} |y⟩⟨y|."""
    if not K.is_cq:
        raise GraphError(f"{K.name} has no cq decomposition")
    rows = []
    for i, p in enumerate(K.cq):
        e = p.entries
        if np.abs(e - np.diag(np.diag(e))).max() > PROJECTOR_TOL:
            raise GraphError(f"cq entry {i} is not diagonal; graph is not classical", factor=i)
        rows.append((np.real(np.diag(e)) > 0.5).astype(float))
    return np.array(rows)
