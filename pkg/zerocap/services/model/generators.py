"""Named channel and graph families, plus seeded random instances for the property suites."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from zerocap.utils.errors import GraphError
from zerocap.services.matcore import HermitianMatrix, random_isometry, random_unitary
from zerocap.services.model.channels import Channel
from zerocap.services.model.graphs import NCGraph


# ── Channels ─────────────────────────────────────────────────────────────
def identity_channel(d: int) -> Channel:
    return Channel([np.eye(d)], d, d, name=f"id_{d}")


def amplitude_damping(r: float) -> Channel:
    if not 0.0 <= r <= 1.0:
        raise GraphError(f"damping parameter r={r} outside [0, 1]")
    e0 = np.diag([1.0, np.sqrt(1.0 - r)])
    e1 = np.array([[0.0, np.sqrt(r)], [0.0, 0.0]])
    return Channel([e0, e1] if r > 0 else [e0], 2, 2, name=f"amplitude_damping({r:g})")


def classical_channel(p, name: Optional[str] = None) -> Channel:
    """Transition matrix p[x][y] = N(y|x); Kraus {√p(y|x) |y⟩⟨x|}."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 2 or p.size == 0:
        raise GraphError("transition matrix must be a non-empty 2-D array")
    if np.any(p < -1e-12):
        raise GraphError("transition matrix has negative entries")
    nx, ny = p.shape
    kraus = []
    for x in range(nx):
        for y in range(ny):
            if p[x, y] > 0:
                k = np.zeros((ny, nx))
                k[y, x] = np.sqrt(p[x, y])
                kraus.append(k)
    return Channel(kraus, nx, ny, name=name or f"classical[{nx}->{ny}]")


def cq_channel(states: Sequence, name: Optional[str] = None) -> Channel:
    """i ↦ ρ_i. Each ρ_i = Σ λ |v⟩⟨v| contributes Kraus √λ |v⟩⟨i|."""
    if not states:
        raise GraphError("empty cq state list")
    rhos = [HermitianMatrix(s) for s in states]
    n, d = len(rhos), rhos[0].dim
    kraus = []
    for i, rho in enumerate(rhos):
        if rho.dim != d:
            raise GraphError(f"cq state {i} has dimension {rho.dim}, expected {d}", factor=i)
        for lam, v in zip(rho.eigvals, rho.eigvecs.T):
            if lam > 1e-12:
                k = np.zeros((d, n), dtype=complex)
                k[:, i] = np.sqrt(lam) * v
                kraus.append(k)
    return Channel(kraus, n, d, name=name or f"cq[{n}->{d}]")


def pure_state_channel(vectors: Sequence, name: Optional[str] = None) -> Channel:
    return cq_channel([HermitianMatrix.from_vector(v, normalize=True) for v in vectors], name=name)


def constant_channel(rho, d_in: int) -> Channel:
    rho = HermitianMatrix(rho)
    kraus = []
    for lam, v in zip(rho.eigvals, rho.eigvecs.T):
        if lam > 1e-12:
            for i in range(d_in):
                k = np.zeros((rho.dim, d_in), dtype=complex)
                k[:, i] = np.sqrt(lam) * v
                kraus.append(k)
    return Channel(kraus, d_in, rho.dim, name=f"constant[{d_in}->{rho.dim}]")


def two_state_vectors(alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """ψ0 = α|0⟩ + β|1⟩, ψ1 = α|0⟩ − β|1⟩ with overlap α² − β²."""
    if not 0.0 < alpha <= 1.0:
        raise GraphError(f"two_state needs α in (0, 1], got {alpha}")
    beta = np.sqrt(max(0.0, 1.0 - alpha * alpha))
    return np.array([alpha, beta], dtype=complex), np.array([alpha, -beta], dtype=complex)


def two_state_channel(alpha: float) -> Channel:
    return pure_state_channel(two_state_vectors(alpha), name=f"two_state({alpha:.6g})")


def umbrella_vectors() -> list[np.ndarray]:
    """
    Lovász umbrella for the pentagon: five unit vectors in R³ with
    u_i ⊥ u_j exactly when i, j are non-adjacent in C5.
    """
    c = np.cos(np.pi / 5)
    s = np.sqrt(1.0 / (1.0 + c))
    z = np.sqrt(c / (1.0 + c))
    return [
        np.array([s * np.cos(2 * np.pi * k / 5), s * np.sin(2 * np.pi * k / 5), z], dtype=complex)
        for k in range(5)
    ]


# ── Graphs ───────────────────────────────────────────────────────────────
def two_state_graph(alpha: float) -> NCGraph:
    psi = two_state_vectors(alpha)
    return NCGraph.from_cq([HermitianMatrix.from_vector(v) for v in psi], name=f"two_state({alpha:.6g})")


def pentagon_graph() -> NCGraph:
    return NCGraph.from_cq([HermitianMatrix.from_vector(v) for v in umbrella_vectors()], name="umbrella_C5")


def noiseless_classical(ell: int) -> NCGraph:
    """Δ_ℓ: P = Σ_i |i⟩⟨i| ⊗ |i⟩⟨i|."""
    if ell < 1:
        raise GraphError(f"alphabet size must be positive, got {ell}")
    projectors = []
    for i in range(ell):
        p = np.zeros((ell, ell))
        p[i, i] = 1.0
        projectors.append(HermitianMatrix(p))
    return NCGraph.from_cq(projectors, name=f"Delta_{ell}")


def noiseless_quantum(ell: int) -> NCGraph:
    """K = ℂ1 on ℓ dimensions: P = Φ/ℓ."""
    if ell < 1:
        raise GraphError(f"dimension must be positive, got {ell}")
    return NCGraph.from_kraus([np.eye(ell)], name=f"C1_{ell}")


def amplitude_damping_graph(r: float) -> NCGraph:
    ch = amplitude_damping(r)
    return NCGraph.from_kraus(ch.kraus, name=ch.name)


def classical_graph(p) -> NCGraph:
    """Bipartite graph of a transition matrix, as a cq-graph with diagonal P_x."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 2 or p.size == 0:
        raise GraphError("transition matrix must be a non-empty 2-D array")
    projectors = []
    for x, row in enumerate(p):
        support = (row > 0).astype(float)
        if not support.any():
            raise GraphError(f"input {x} has no outgoing edge", factor=x)
        projectors.append(HermitianMatrix(np.diag(support)))
    return NCGraph.from_cq(projectors, name=f"classical[{p.shape[0]}->{p.shape[1]}]")


# ── Random instances ─────────────────────────────────────────────────────
def random_channel(d_in: int, d_out: int, n_kraus: int, rng: np.random.Generator) -> Channel:
    v = random_isometry(d_in, d_out * n_kraus, rng)
    kraus = [v[k * d_out:(k + 1) * d_out, :] for k in range(n_kraus)]
    return Channel(kraus, d_in, d_out, name=f"random[{d_in}->{d_out},{n_kraus}]")


def random_classical_channel(nx: int, ny: int, rng: np.random.Generator, density: float = 0.5) -> np.ndarray:
    """Row-stochastic p[x][y] with a random support; every row keeps at least one entry."""
    mask = rng.random((nx, ny)) < density
    for x in range(nx):
        if not mask[x].any():
            mask[x, rng.integers(ny)] = True
    p = rng.random((nx, ny)) * mask
    return p / p.sum(axis=1, keepdims=True)


def random_cq_states(n: int, d: int, rng: np.random.Generator, rank: int = 1) -> list[np.ndarray]:
    states = []
    for _ in range(n):
        g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
        rho = g @ g.conj().T
        states.append(rho / np.trace(rho).real)
    return states


def random_cq_graph(n: int, d: int, rng: np.random.Generator, max_rank: int = 1) -> NCGraph:
    projectors = []
    for _ in range(n):
        r = int(rng.integers(1, max_rank + 1))
        u = random_unitary(d, rng)[:, :r]
        projectors.append(HermitianMatrix(u @ u.conj().T))
    return NCGraph.from_cq(projectors, name=f"random_cq[{n}->{d}]")
