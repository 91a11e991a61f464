"""
zerocap/services/matcore/hermitian.py: immutable Hermitian operator with a tensor-factor signature.

Every multi-system operator in the package travels as a HermitianMatrix so the
subsystem layout is explicit. Basis convention is row-major: the factor tuple
(a, b) of A⊗B sits at index a·d_B + b.
"""

from __future__ import annotations

from functools import cached_property
from math import prod
from typing import Iterable, Optional, Sequence

import numpy as np

from zerocap.utils.config import settings
from zerocap.utils.errors import DimensionError, NotHermitianError


class HermitianMatrix:
    """
    Dense Hermitian matrix, hermitized at construction.

    Exposes:
        .entries     read-only complex ndarray
        .dim         side length
        .factors     tensor-factor signature (tuple of ints, product = dim)
        .eigvals / .eigvecs   cached spectral data
    """

    def __init__(
        self,
        entries,
        factors: Optional[Sequence[int]] = None,
        *,
        tol: Optional[float] = None,
    ):
        arr = np.array(entries, dtype=complex)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
        dim = arr.shape[0]
        factors = tuple(int(f) for f in (factors if factors is not None else (dim,)))
        if any(f < 1 for f in factors) or prod(factors) != dim:
            raise DimensionError(
                f"factor signature {list(factors)} does not multiply to dimension {dim}",
                factors=list(factors),
            )

        tol = settings.HERMITIAN_TOL if tol is None else tol
        scale = float(np.abs(arr).max()) if arr.size else 0.0
        asym = float(np.abs(arr - arr.conj().T).max()) if arr.size else 0.0
        if asym > tol * max(scale, np.finfo(float).tiny):
            raise NotHermitianError(
                f"matrix is not Hermitian: asymmetry {asym:.3e} relative to entry scale {scale:.3e}"
            )

        herm = (arr + arr.conj().T) / 2
        herm.setflags(write=False)
        self._entries = herm
        self._factors = factors

    # ── Basic accessors ──────────────────────────────────────────────────
    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def factors(self) -> tuple[int, ...]:
        return self._factors

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._entries.copy() if copy else self._entries
        return self._entries.astype(dtype)

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim}, factors={list(self.factors)})"

    # ── Spectral data ────────────────────────────────────────────────────
    @cached_property
    def _eigh(self) -> tuple[np.ndarray, np.ndarray]:
        w, v = np.linalg.eigh(self._entries)
        w.setflags(write=False)
        v.setflags(write=False)
        return w, v

    @property
    def eigvals(self) -> np.ndarray:
        return self._eigh[0]

    @property
    def eigvecs(self) -> np.ndarray:
        return self._eigh[1]

    def trace(self) -> float:
        return float(np.real(np.trace(self._entries)))

    def norm(self) -> float:
        """Operator norm (largest absolute eigenvalue)."""
        w = self.eigvals
        return float(max(abs(w[0]), abs(w[-1]))) if w.size else 0.0

    def is_psd(self, tol: float = 1e-9) -> bool:
        return bool(self.eigvals[0] >= -tol * max(1.0, self.norm()))

    # ── Algebra (all results are new immutable values) ───────────────────
    def _check_same(self, other: "HermitianMatrix") -> None:
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if isinstance(other, HermitianMatrix):
            self._check_same(other)
            return HermitianMatrix(self._entries + other._entries, self._factors)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, HermitianMatrix):
            self._check_same(other)
            return HermitianMatrix(self._entries - other._entries, self._factors)
        return NotImplemented

    def __neg__(self):
        return HermitianMatrix(-self._entries, self._factors)

    def __mul__(self, scalar):
        if np.iscomplexobj(scalar) and np.imag(scalar) != 0:
            raise NotHermitianError("multiplying a Hermitian matrix by a complex scalar")
        return HermitianMatrix(self._entries * float(np.real(scalar)), self._factors)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / float(scalar))

    def conj(self) -> "HermitianMatrix":
        """Entrywise complex conjugate (equivalently the transpose)."""
        return HermitianMatrix(self._entries.conj(), self._factors)

    def sandwich(self, a: np.ndarray, factors: Optional[Sequence[int]] = None) -> "HermitianMatrix":
        """a X a†, a possibly rectangular."""
        a = np.asarray(a, dtype=complex)
        if a.shape[1] != self.dim:
            raise DimensionError(f"cannot sandwich {self.dim}-dim operator with {a.shape} matrix")
        return HermitianMatrix(a @ self._entries @ a.conj().T, factors)

    def kron(self, other: "HermitianMatrix") -> "HermitianMatrix":
        return HermitianMatrix(np.kron(self._entries, other._entries), self._factors + other._factors)

    def with_factors(self, factors: Sequence[int]) -> "HermitianMatrix":
        return HermitianMatrix(self._entries, factors)

    def allclose(self, other, atol: float = 1e-9) -> bool:
        other = np.asarray(other)
        return other.shape == self._entries.shape and bool(np.abs(self._entries - other).max() <= atol)

    def equals(self, other: "HermitianMatrix", atol: float = 0.0) -> bool:
        return (
            isinstance(other, HermitianMatrix)
            and self._factors == other._factors
            and self.allclose(other.entries, atol)
        )

    # ── Constructors ─────────────────────────────────────────────────────
    @classmethod
    def identity(cls, dim: int, factors: Optional[Sequence[int]] = None) -> "HermitianMatrix":
        return cls(np.eye(dim), factors)

    @classmethod
    def zeros(cls, dim: int, factors: Optional[Sequence[int]] = None) -> "HermitianMatrix":
        return cls(np.zeros((dim, dim)), factors)

    @classmethod
    def from_vector(cls, v, normalize: bool = False, factors: Optional[Sequence[int]] = None) -> "HermitianMatrix":
        """|v⟩⟨v| (divided by ‖v‖² when normalize)."""
        v = np.asarray(v, dtype=complex).ravel()
        m = np.outer(v, v.conj())
        if normalize:
            m = m / np.vdot(v, v).real
        return cls(m, factors)

    @classmethod
    def diagonal(cls, values: Iterable[float], factors: Optional[Sequence[int]] = None) -> "HermitianMatrix":
        return cls(np.diag(np.asarray(list(values), dtype=float)), factors)


def as_array(x) -> np.ndarray:
    """Entries of a HermitianMatrix or any array-like, as a complex ndarray."""
    if isinstance(x, HermitianMatrix):
        return x.entries
    return np.asarray(x, dtype=complex)
