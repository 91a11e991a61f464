"""
zerocap/services/matcore/ops.py: tensor reorderings, partial traces and spectral helpers.

The *_array helpers work on raw (D, D, *extra) arrays so the SDP modelling
layer can apply them to whole stacks of coefficient matrices at once; the
public functions wrap them for HermitianMatrix values.
"""

from __future__ import annotations

from math import prod
from typing import Iterable, Optional, Sequence

import numpy as np

from zerocap.utils.config import settings
from zerocap.utils.errors import DimensionError, NotPsdError
from zerocap.services.matcore.hermitian import HermitianMatrix


# ── Array-level helpers ──────────────────────────────────────────────────
def _check_dims(arr: np.ndarray, dims: Sequence[int]) -> int:
    d = prod(dims)
    if arr.shape[0] != d or arr.shape[1] != d:
        raise DimensionError(f"operator of shape {arr.shape[:2]} does not match factors {list(dims)}")
    return d


def permute_array(arr: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder the subsystems of a square operator; new factor k is old factor order[k]."""
    dims = list(dims)
    n = len(dims)
    if sorted(order) != list(range(n)):
        raise DimensionError(f"order {list(order)} is not a permutation of {n} factors")
    _check_dims(arr, dims)
    extra = arr.shape[2:]
    t = arr.reshape(dims + dims + list(extra))
    axes = list(order) + [n + o for o in order] + list(range(2 * n, 2 * n + len(extra)))
    t = t.transpose(axes)
    d = prod(dims)
    return t.reshape((d, d) + extra)


def partial_trace_array(arr: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every factor not in keep. Extra trailing axes are carried along."""
    dims = list(dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise DimensionError("partial_trace needs at least one factor to keep")
    bad = [k for k in keep if k < 0 or k >= n]
    if bad:
        raise DimensionError(f"factor index {bad[0]} out of range for {n} factors", factor=bad[0])
    _check_dims(arr, dims)
    extra = arr.shape[2:]
    t = arr.reshape(dims + dims + list(extra))

    rows = list(range(n))
    cols = [k if k not in keep else n + k for k in range(n)]
    tail = list(range(2 * n, 2 * n + len(extra)))
    out = [k for k in keep] + [n + k for k in keep] + tail
    res = np.einsum(t, rows + cols + tail, out)
    dk = prod(dims[k] for k in keep)
    return res.reshape((dk, dk) + extra)


# ── Public operations ────────────────────────────────────────────────────
def kron_perm(ops: Sequence[HermitianMatrix], order: Optional[Sequence[int]] = None) -> HermitianMatrix:
    """Tensor product of ops with the flattened factor list permuted to order."""
    if not ops:
        raise DimensionError("kron_perm needs at least one operator")
    flat: list[int] = []
    entries = np.ones((1, 1), dtype=complex)
    for op in ops:
        flat.extend(op.factors)
        entries = np.kron(entries, op.entries)
    if order is None:
        order = list(range(len(flat)))
    order = list(order)
    if sorted(order) != list(range(len(flat))):
        missing = sorted(set(range(len(flat))) - set(order))
        raise DimensionError(
            f"order {order} is not a permutation of the {len(flat)} factors {flat}",
            factor=missing[0] if missing else -1,
        )
    out = permute_array(entries, flat, order)
    return HermitianMatrix(out, [flat[k] for k in order])


def permute(x: HermitianMatrix, order: Sequence[int]) -> HermitianMatrix:
    return kron_perm([x], order)


def partial_trace(x: HermitianMatrix, keep: Iterable[int]) -> HermitianMatrix:
    keep = sorted(set(int(k) for k in keep))
    out = partial_trace_array(x.entries, x.factors, keep)
    kept = [x.factors[k] for k in keep] if all(0 <= k < len(x.factors) for k in keep) else None
    return HermitianMatrix(out, kept)


def spectrum(x: HermitianMatrix) -> np.ndarray:
    """Eigenvalues in ascending order."""
    return np.array(x.eigvals)


def min_eigenvalue(x: HermitianMatrix) -> float:
    return float(x.eigvals[0])


def max_eigenvalue(x: HermitianMatrix) -> float:
    return float(x.eigvals[-1])


def support_basis(x: HermitianMatrix, tol: Optional[float] = None) -> np.ndarray:
    """Orthonormal columns spanning the support of a PSD operator."""
    tol = settings.RANK_TOL if tol is None else tol
    w, v = x.eigvals, x.eigvecs
    top = float(w[-1]) if w.size else 0.0
    scale = max(abs(top), abs(float(w[0])) if w.size else 0.0)
    if w.size and w[0] < -tol * max(scale, 1e-300) and scale > 0:
        raise NotPsdError(f"operator has eigenvalue {w[0]:.3e} below -tol·‖X‖ ({-tol * scale:.3e})")
    if top <= 0:
        return np.zeros((x.dim, 0), dtype=complex)
    return np.array(v[:, w > tol * top])


def support_projector(x: HermitianMatrix, tol: Optional[float] = None) -> HermitianMatrix:
    v = support_basis(x, tol)
    return HermitianMatrix(v @ v.conj().T, x.factors)


def projector_basis(p: HermitianMatrix, complement: bool = False) -> np.ndarray:
    """Orthonormal columns spanning range(P), or range(1−P) when complement is set."""
    w, v = p.eigvals, p.eigvecs
    mask = w < 0.5 if complement else w >= 0.5
    return np.array(v[:, mask])


def rank(x: HermitianMatrix, tol: Optional[float] = None) -> int:
    return int(support_basis(x, tol).shape[1])


def is_projector(x: HermitianMatrix, tol: float = 1e-9) -> bool:
    e = x.entries
    return bool(np.abs(e @ e - e).max() <= tol * max(1.0, float(np.abs(e).max())))
