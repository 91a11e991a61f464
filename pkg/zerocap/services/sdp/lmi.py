"""
zerocap/services/sdp/lmi.py: small modelling layer: affine matrix expressions and LMI programs.

Every formulation in the quantities package is written against LmiProgram:
Hermitian matrix variables and real vector variables, affine expressions
built with +, −, scalar *, @ by constants, kron, partial_trace and trace,
PSD constraints and equality constraints. compile() eliminates the
equalities exactly through a null-space parametrization, keeps only the
coordinates the LMIs can see, and hands the remaining problem to a backend
as the dual of a standard-form SDP. Witnesses therefore satisfy the
equalities to round-off whatever the solver tolerance.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.linalg import null_space

from zerocap.utils.config import settings
from zerocap.utils.constants import INFEASIBLE, OPTIMAL, UNBOUNDED
from zerocap.utils.errors import DimensionError, NotHermitianError
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore.bases import hermitian_basis
from zerocap.services.matcore.hermitian import HermitianMatrix
from zerocap.services.matcore.ops import partial_trace_array
from zerocap.services.sdp.backends import get_backend
from zerocap.services.sdp.problem import DIAGONAL, HERMITIAN, SdpBlock, SdpProblem, SdpSolution

logger = setup_logging(__name__)

Operand = Union["Affine", np.ndarray, HermitianMatrix, float, complex, int]


def _const(x) -> np.ndarray:
    if isinstance(x, HermitianMatrix):
        return x.entries
    return np.asarray(x, dtype=complex)


class Affine:
    """
    x ↦ const + lin·x, x the program's real coordinate vector.

    `lin` has shape const.shape + (n,), n the number of coordinates known
    when the expression was built; shorter expressions are zero-padded.
    """

    __array_ufunc__ = None

    def __init__(self, const, lin):
        self.const = np.asarray(const, dtype=complex)
        self.lin = np.asarray(lin, dtype=complex)
        if self.lin.shape[:-1] != self.const.shape:
            raise DimensionError(f"affine parts disagree: {self.const.shape} vs {self.lin.shape}")

    @classmethod
    def constant(cls, value) -> "Affine":
        c = _const(value)
        return cls(c, np.zeros(c.shape + (0,), dtype=complex))

    @classmethod
    def lift(cls, value: Operand) -> "Affine":
        return value if isinstance(value, Affine) else cls.constant(value)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.const.shape

    @property
    def ncoords(self) -> int:
        return self.lin.shape[-1]

    def padded(self, n: int) -> np.ndarray:
        if self.ncoords == n:
            return self.lin
        if self.ncoords > n:
            raise DimensionError(f"expression uses {self.ncoords} coordinates, program has {n}")
        pad = np.zeros(self.shape + (n - self.ncoords,), dtype=complex)
        return np.concatenate([self.lin, pad], axis=-1)

    def value(self, x: np.ndarray) -> np.ndarray:
        return self.const + self.padded(x.shape[0]) @ x

    def __repr__(self) -> str:
        return f"Affine(shape={self.shape}, coords={self.ncoords})"

    # ── Arithmetic ───────────────────────────────────────────────────────
    def _combine(self, other: Operand, sign: float) -> "Affine":
        other = Affine.lift(other)
        if other.shape != self.shape:
            if other.shape == () and other.ncoords == 0 and other.const == 0:
                return self
            raise DimensionError(f"shape mismatch in sum: {self.shape} vs {other.shape}")
        n = max(self.ncoords, other.ncoords)
        return Affine(self.const + sign * other.const, self.padded(n) + sign * other.padded(n))

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __radd__(self, other):
        if isinstance(other, (int, float)) and other == 0:
            return self
        return Affine.lift(other)._combine(self, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __rsub__(self, other):
        return Affine.lift(other)._combine(self, -1.0)

    def __neg__(self):
        return Affine(-self.const, -self.lin)

    def __mul__(self, other):
        if isinstance(other, Affine):
            if other.ncoords and self.ncoords:
                raise DimensionError("product of two non-constant expressions is not affine")
            if self.shape == ():
                return other * complex(self.const)
            if other.shape == ():
                return self * complex(other.const)
            raise DimensionError("elementwise products of matrix expressions are not supported")
        arr = _const(other)
        if arr.shape == ():
            s = complex(arr)
            return Affine(self.const * s, self.lin * s)
        if self.shape == ():
            return Affine(arr * self.const, arr[..., None] * self.lin)
        raise DimensionError("use @ for matrix products")

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / complex(scalar))

    def __matmul__(self, other):
        m = _const(other)
        return Affine(self.const @ m, np.einsum("...ijn,jk->...ikn", self.lin, m) if self.lin.ndim >= 3 else np.einsum("jn,jk->kn", self.lin, m))

    def __rmatmul__(self, other):
        m = _const(other)
        if self.lin.ndim >= 3:
            return Affine(m @ self.const, np.einsum("ki,...ijn->...kjn", m, self.lin))
        return Affine(m @ self.const, np.einsum("ki,in->kn", m, self.lin))

    def __getitem__(self, idx):
        return Affine(self.const[idx], self.lin[idx])

    @property
    def H(self) -> "Affine":
        """Conjugate transpose of a matrix expression."""
        return Affine(self.const.conj().T, np.conj(np.swapaxes(self.lin, 0, 1)))

    @property
    def real(self) -> "Affine":
        return Affine(np.real(self.const), np.real(self.lin))

    def trace(self) -> "Affine":
        return Affine(np.trace(self.const), np.trace(self.lin, axis1=0, axis2=1))

    def sum(self) -> "Affine":
        return Affine(self.const.sum(), self.lin.reshape(self.const.size, self.ncoords).sum(axis=0))


# ── Expression helpers ──────────────────────────────────────────────────
def kron(a: Operand, b: Operand) -> Affine:
    """Kronecker product; at most one side may be non-constant."""
    a, b = Affine.lift(a), Affine.lift(b)
    if a.ncoords and b.ncoords:
        raise DimensionError("kron of two non-constant expressions is not affine")
    if b.ncoords == 0:
        k = b.const
        r, c = a.shape
        p, q = k.shape
        lin = np.einsum("ijn,kl->ikjln", a.lin, k).reshape(r * p, c * q, a.ncoords)
        return Affine(np.kron(a.const, k), lin)
    k = a.const
    r, c = b.shape
    p, q = k.shape
    lin = np.einsum("kl,ijn->kiljn", k, b.lin).reshape(p * r, q * c, b.ncoords)
    return Affine(np.kron(k, b.const), lin)


def partial_trace(expr: Operand, dims: Sequence[int], keep: Sequence[int]) -> Affine:
    e = Affine.lift(expr)
    return Affine(partial_trace_array(e.const, dims, keep), partial_trace_array(e.lin, dims, keep))


def trace(expr: Operand) -> Affine:
    return Affine.lift(expr).trace()


def inner(const: Operand, expr: Affine) -> Affine:
    """tr(C X) for a constant C."""
    return (Affine.lift(expr).__rmatmul__(const)).trace()


def dot(coeffs, expr: Affine) -> Affine:
    """Σ_i c_i x_i for a vector expression x."""
    c = np.asarray(coeffs, dtype=complex)
    return Affine(c @ expr.const, np.einsum("i,in->n", c, expr.lin))


# ── Program ─────────────────────────────────────────────────────────────
@dataclass
class _Var:
    name: str
    kind: str
    dim: int
    offset: int
    size: int
    scalar: bool = False


@dataclass
class LmiResult:
    """
    Outcome of an LmiProgram solve.

    value        objective at the returned variables (the feasible side)
    bound        objective bound certified by the LMI multipliers
    variables    variable name -> HermitianMatrix or real vector
    multipliers  PSD constraint label -> multiplier (Hermitian or vector)
    """
    status: str
    value: float
    bound: float
    variables: dict = field(default_factory=dict)
    multipliers: dict = field(default_factory=dict)
    solution: Optional[SdpSolution] = None
    seconds: float = 0.0
    name: str = "lmi"

    @property
    def gap(self) -> float:
        return abs(self.value - self.bound)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    def __getitem__(self, name: str):
        return self.variables[name]


@dataclass
class CompiledLmi:
    problem: Optional[SdpProblem]
    x0: np.ndarray
    W: np.ndarray
    c0: float
    sign: float
    status: Optional[str] = None


class LmiProgram:
    """
    Builder for  min/max  c·x + c₀  s.t.  F_j(x) ⪰ 0,  G_k(x) = 0.

        prog = LmiProgram("sigma")
        T = prog.hermitian("T", 2)
        prog.add_psd("T>=J", kron(np.eye(2), T) - J)
        prog.minimize(T.trace())
        result = prog.solve()
    """

    def __init__(self, name: str = "lmi"):
        self.name = name
        self._vars: dict[str, _Var] = {}
        self._n = 0
        self._psd: list[tuple[str, Affine]] = []
        self._eq: list[tuple[str, Affine]] = []
        self._objective: Optional[Affine] = None
        self._sign = 1.0

    # ── Variables ────────────────────────────────────────────────────────
    def _register(self, name: str, kind: str, dim: int, size: int, scalar: bool = False) -> _Var:
        if name in self._vars:
            raise DimensionError(f"variable {name!r} declared twice")
        var = _Var(name, kind, dim, self._n, size, scalar)
        self._vars[name] = var
        self._n += size
        return var

    def hermitian(self, name: str, dim: int) -> Affine:
        var = self._register(name, HERMITIAN, dim, dim * dim)
        basis = hermitian_basis(dim)
        lin = np.zeros((dim, dim, self._n), dtype=complex)
        lin[:, :, var.offset:var.offset + var.size] = np.moveaxis(basis, 0, -1)
        return Affine(np.zeros((dim, dim)), lin)

    def real(self, name: str, size: Optional[int] = None) -> Affine:
        """Real vector variable, or a real scalar when size is None."""
        n = 1 if size is None else size
        var = self._register(name, DIAGONAL, n, n, scalar=size is None)
        lin = np.zeros((n, self._n), dtype=complex)
        lin[:, var.offset:var.offset + n] = np.eye(n)
        expr = Affine(np.zeros(n), lin)
        return expr[0] if size is None else expr

    # ── Constraints and objective ────────────────────────────────────────
    def add_psd(self, label: str, expr: Operand) -> None:
        """Hermitian matrix expression ⪰ 0, or every entry of a vector/scalar expression ≥ 0."""
        e = Affine.lift(expr)
        if e.const.ndim > 2:
            raise DimensionError(f"constraint {label}: expression of shape {e.shape}")
        self._psd.append((label, e))

    def add_nonneg(self, label: str, expr: Operand) -> None:
        self.add_psd(label, expr)

    def add_equal(self, label: str, lhs: Operand, rhs: Operand = 0.0) -> None:
        e = Affine.lift(lhs) - Affine.lift(rhs) if not (np.isscalar(rhs) and rhs == 0) else Affine.lift(lhs)
        self._eq.append((label, e))

    def minimize(self, expr: Operand) -> None:
        self._objective, self._sign = Affine.lift(expr), 1.0

    def maximize(self, expr: Operand) -> None:
        self._objective, self._sign = Affine.lift(expr), -1.0

    # ── Compilation ──────────────────────────────────────────────────────
    def compile(self) -> CompiledLmi:
        n = self._n
        obj = self._objective if self._objective is not None else Affine.constant(0.0)
        if obj.shape != ():
            raise DimensionError(f"objective must be scalar, got shape {obj.shape}")
        c = self._sign * np.real(obj.padded(n))
        c_const = self._sign * float(np.real(obj.const))

        # equalities: real and imaginary parts of every entry
        rows, rhs = [], []
        for label, e in self._eq:
            lin = e.padded(n).reshape(-1, n)
            const = e.const.ravel()
            for part_lin, part_const in ((lin.real, const.real), (lin.imag, const.imag)):
                keep = (np.abs(part_lin).max(axis=1, initial=0.0) > 0) | (np.abs(part_const) > 0)
                rows.append(part_lin[keep])
                rhs.append(-part_const[keep])
        if rows and sum(r.shape[0] for r in rows):
            G = np.vstack(rows)
            h = np.concatenate(rhs)
            x0, *_ = np.linalg.lstsq(G, h, rcond=None)
            if np.linalg.norm(G @ x0 - h) > 1e-9 * (1 + np.linalg.norm(h)):
                logger.debug(f"{self.name}: equality constraints are inconsistent")
                return CompiledLmi(None, x0, np.zeros((n, 0)), 0.0, self._sign, status=INFEASIBLE)
            basis = null_space(G, rcond=1e-10)
        else:
            x0 = np.zeros(n)
            basis = np.eye(n)

        # LMI data on the reduced coordinates
        blocks, F0s, Fzs = [], [], []
        for label, e in self._psd:
            lin = e.padded(n)
            F0 = e.const + lin @ x0
            Fz = lin @ basis
            if e.const.ndim == 2:
                F0 = _hermitized(F0, f"constraint {label}")
                Fz = _hermitized(Fz, f"constraint {label}", stacked=True)
                blocks.append(SdpBlock(label, e.shape[0], HERMITIAN))
            else:
                F0 = np.atleast_1d(F0)
                Fz = Fz.reshape(F0.shape[0], -1)
                if max(np.abs(F0.imag).max(initial=0), np.abs(Fz.imag).max(initial=0)) > 1e-9:
                    raise NotHermitianError(f"constraint {label}: complex entries in a scalar inequality")
                F0, Fz = F0.real, Fz.real
                blocks.append(SdpBlock(label, F0.shape[0], DIAGONAL))
            F0s.append(F0)
            Fzs.append(Fz)

        # directions in which no LMI changes
        nred = basis.shape[1]
        if Fzs and nred:
            stacked = np.hstack(
                [np.concatenate([f.real.reshape(-1, nred), f.imag.reshape(-1, nred)]).T for f in Fzs]
            )
        else:
            stacked = np.zeros((nred, 0))
        c_red = basis.T @ c
        if stacked.size:
            U, s, _ = np.linalg.svd(stacked, full_matrices=False)
            r = int(np.sum(s > 1e-10 * max(s[0], 1e-300))) if s.size else 0
            keep = U[:, :r]
        else:
            keep = np.zeros((basis.shape[1], 0))
        leftover = c_red - keep @ (keep.T @ c_red)
        if np.linalg.norm(leftover) > 1e-9 * (1 + np.linalg.norm(c_red)):
            logger.debug(f"{self.name}: objective is free along an unconstrained direction")
            return CompiledLmi(None, x0, basis, 0.0, self._sign, status=UNBOUNDED)

        W = basis @ keep
        c_w = W.T @ c
        c0 = float(c @ x0) + c_const
        if not self._psd or W.shape[1] == 0:
            feasible = all(_block_is_psd(f0) for f0 in F0s)
            return CompiledLmi(None, x0, W, c0, self._sign, status=OPTIMAL if feasible else INFEASIBLE)

        stacks = {}
        objective = {}
        for blk, F0, Fz in zip(blocks, F0s, Fzs):
            stacks[blk.label] = np.moveaxis(Fz @ keep, -1, 0)
            objective[blk.label] = F0
        problem = SdpProblem(blocks, objective, stacks, c_w.astype(float), name=self.name)
        return CompiledLmi(problem, x0, W, c0, self._sign)

    # ── Solve ────────────────────────────────────────────────────────────
    def solve(self, options=None, backend=None) -> LmiResult:
        start = time.perf_counter()
        compiled = self.compile()
        if compiled.problem is None:
            return self._trivial(compiled, start)

        backend = get_backend(backend)
        sol = backend.solve(compiled.problem, options)

        # the LMI program is the standard-form dual: w = −y, value c0 − d, bound c0 − p
        status = {INFEASIBLE: UNBOUNDED, UNBOUNDED: INFEASIBLE}.get(sol.status, sol.status)
        w = -np.asarray(sol.y, dtype=float)
        x = compiled.x0 + compiled.W @ w
        value = compiled.sign * (compiled.c0 - sol.dual_value)
        bound = compiled.sign * (compiled.c0 - sol.primal_value)
        if status == INFEASIBLE:
            value = bound = compiled.sign * np.inf
        elif status == UNBOUNDED:
            value = bound = -compiled.sign * np.inf
        result = LmiResult(
            status=status,
            value=float(value),
            bound=float(bound),
            variables=self._unpack(x),
            multipliers=self._multipliers(sol),
            solution=sol,
            seconds=time.perf_counter() - start,
            name=self.name,
        )
        logger.info(
            f"{self.name}: {status} value={result.value:.10g} bound={result.bound:.10g} "
            f"iterations={sol.iterations} gap={sol.residuals.gap:.1e} ({result.seconds:.2f}s)"
        )
        return result

    def _trivial(self, compiled: CompiledLmi, start: float) -> LmiResult:
        x = compiled.x0
        value = compiled.sign * compiled.c0
        if compiled.status == INFEASIBLE:
            value = compiled.sign * np.inf
        elif compiled.status == UNBOUNDED:
            value = -compiled.sign * np.inf
        return LmiResult(
            status=compiled.status or OPTIMAL,
            value=float(value),
            bound=float(value),
            variables=self._unpack(x),
            seconds=time.perf_counter() - start,
            name=self.name,
        )

    def _unpack(self, x: np.ndarray) -> dict:
        out = {}
        for name, var in self._vars.items():
            coords = x[var.offset:var.offset + var.size]
            if var.kind == HERMITIAN:
                basis = hermitian_basis(var.dim)
                out[name] = HermitianMatrix(np.tensordot(coords, basis, axes=1))
            else:
                out[name] = float(coords[0]) if var.scalar else np.array(coords, dtype=float)
        return out

    def _multipliers(self, sol: SdpSolution) -> dict:
        out = {}
        for label, e in self._psd:
            xb = sol.X.get(label)
            if xb is None:
                continue
            out[label] = HermitianMatrix(xb, tol=1e-6) if e.const.ndim == 2 else np.asarray(xb, dtype=float)
        return out

    def expression_value(self, expr: Affine, result: LmiResult) -> np.ndarray:
        """Evaluate an expression of this program at a solved point."""
        x = np.zeros(self._n)
        for name, var in self._vars.items():
            v = result.variables[name]
            if var.kind == HERMITIAN:
                basis = hermitian_basis(var.dim)
                x[var.offset:var.offset + var.size] = np.real(np.einsum("kij,ji->k", basis, np.asarray(v.entries)))
            else:
                x[var.offset:var.offset + var.size] = np.atleast_1d(v)
        return expr.value(x)


def _hermitized(m: np.ndarray, where: str, stacked: bool = False) -> np.ndarray:
    mt = np.conj(np.swapaxes(m, 0, 1))
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - mt).max(initial=0.0) > settings.HERMITIAN_TOL * scale * 10:
        raise NotHermitianError(f"{where} is not Hermitian")
    return (m + mt) / 2


def _block_is_psd(f0: np.ndarray) -> bool:
    if f0.ndim == 1:
        return bool(np.all(f0 >= -1e-9))
    return bool(np.linalg.eigvalsh(f0)[0] >= -1e-9 * max(1.0, float(np.abs(f0).max(initial=0.0))))
