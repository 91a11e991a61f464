"""Operator bases, the maximally entangled operator and seeded random generators."""

from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from zerocap.services.matcore.hermitian import HermitianMatrix


def hermitian_basis(d: int, traceless: bool = False) -> np.ndarray:
    """
    Orthonormal (Hilbert–Schmidt) basis of d×d Hermitian matrices, shape (k, d, d).

    Order: diagonal units E_jj, then for j<k the pairs (E_jk+E_kj)/√2, i(E_kj−E_jk)/√2.
    With traceless=True the diagonal part is replaced by the d−1 generalized
    Gell-Mann diagonals, giving d²−1 elements.
    """
    mats = []
    if traceless:
        for l in range(1, d):
            m = np.zeros((d, d), dtype=complex)
            m[np.arange(l), np.arange(l)] = 1.0
            m[l, l] = -l
            mats.append(m / np.sqrt(l * (l + 1)))
    else:
        for j in range(d):
            m = np.zeros((d, d), dtype=complex)
            m[j, j] = 1.0
            mats.append(m)
    s = 1.0 / np.sqrt(2.0)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = s
            mats.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j * s
            m[k, j] = 1j * s
            mats.append(m)
    if not mats:
        return np.zeros((0, d, d), dtype=complex)
    return np.array(mats)


def max_entangled_vector(d: int) -> np.ndarray:
    """|Φ⟩ = Σ_k |k⟩|k⟩ (unnormalized)."""
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * d + np.arange(d)] = 1.0
    return v


def max_entangled(d: int) -> HermitianMatrix:
    """Unnormalized |Φ⟩⟨Φ| on A⊗A', trace d."""
    return HermitianMatrix.from_vector(max_entangled_vector(d), factors=(d, d))


# ── Random generators (seeded Generator required) ────────────────────────
def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    return unitary_group.rvs(d, random_state=rng) if d > 1 else np.exp(2j * np.pi * rng.random()).reshape(1, 1)


def random_isometry(d_in: int, d_out: int, rng: np.random.Generator) -> np.ndarray:
    """d_out × d_in matrix with orthonormal columns."""
    g = rng.normal(size=(d_out, d_in)) + 1j * rng.normal(size=(d_out, d_in))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + g.conj().T) / 2
