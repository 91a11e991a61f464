"""
zerocap/services/sdp/solver.py: homogeneous self-dual interior-point method.

Works on the real compiled form (symmetric blocks plus a nonnegative orthant)
of the standard-form pair

    primal:  min ⟨C, X⟩  s.t.  A(X) = b, X ⪰ 0
    dual:    max bᵀy     s.t.  C − A*(y) = Z ⪰ 0

embedded with the extra scalars τ, κ so a start at X = Z = I is always
admissible. Directions use HKM scaling with a Mehrotra predictor-corrector.
Statuses refer to the standard primal: "infeasible" means a dual ray was
found, "unbounded" a primal ray.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, cholesky, eigvalsh, lstsq, solve_triangular

from zerocap.utils.config import settings
from zerocap.utils.constants import INFEASIBLE, MAX_ITER, NUMERICAL, OPTIMAL, UNBOUNDED
from zerocap.utils.logger import setup_logging
from zerocap.services.sdp.problem import (
    CompiledSdp,
    SdpProblem,
    SdpResiduals,
    SdpSolution,
    compile_problem,
    decompile_blocks,
    dump_problem,
)

logger = setup_logging(__name__)


@dataclass
class SolveOptions:
    gap_tol: float = field(default_factory=lambda: settings.GAP_TOL)
    feas_tol: float = field(default_factory=lambda: settings.FEAS_TOL)
    max_iter: int = field(default_factory=lambda: settings.MAX_ITER)
    step_fraction: float = field(default_factory=lambda: settings.STEP_FRACTION)
    dump: bool = field(default_factory=lambda: bool(settings.DUMP_DIR))

    @classmethod
    def from_settings(cls, **overrides) -> "SolveOptions":
        return cls(**{k: v for k, v in overrides.items() if v is not None})


@dataclass
class _RawResult:
    status: str
    X: list[np.ndarray]
    y: np.ndarray
    Z: list[np.ndarray]
    pobj: float
    dobj: float
    pres: float
    dres: float
    gap: float
    iterations: int


def _sym(x: np.ndarray) -> np.ndarray:
    return (x + x.T) / 2


def _chol(x: np.ndarray) -> Optional[np.ndarray]:
    try:
        return cholesky(x, lower=True, check_finite=False)
    except (LinAlgError, ValueError):
        return None


class HsdSolver:
    """One solve per instance; holds the scaled data and the current iterate."""

    def __init__(self, data: CompiledSdp, options: SolveOptions):
        self.opts = options
        self.kinds = list(data.kinds)
        self.sizes = list(data.sizes)
        self.m = data.m
        self.nu = float(sum(self.sizes))

        self.norm_b = float(np.linalg.norm(data.b))
        self.norm_c = float(np.sqrt(sum(np.sum(c * c) for c in data.C)))

        # ── Data scaling: unit rows, then b and C to unit size ──────────
        m = self.m
        sq = np.zeros(m)
        for a in data.A:
            sq += np.sum(a.reshape(m, -1) ** 2, axis=1)
        row_norm = np.sqrt(sq)
        top = row_norm.max(initial=0.0)
        self.zero_rows = row_norm <= 1e-14 * max(1.0, top)
        self.active = ~self.zero_rows
        self.row_norm = row_norm[self.active]
        self.m_act = int(self.active.sum())
        b = data.b[self.active] / np.where(self.row_norm > 0, self.row_norm, 1.0)
        self.sb = max(1.0, float(np.abs(b).max(initial=0.0)))
        self.sc = max(1.0, max((float(np.abs(c).max(initial=0.0)) for c in data.C), default=0.0))
        self.b = b / self.sb
        self.C = [c / self.sc for c in data.C]
        self.A = []
        for a in data.A:
            scaled = a[self.active] / self.row_norm.reshape((-1,) + (1,) * (a.ndim - 1))
            self.A.append(scaled)
        self.Af = [a.reshape(self.m_act, -1) for a in self.A]
        self.raw_b = data.b

    # ── Cone algebra ─────────────────────────────────────────────────────
    def _op(self, X: list[np.ndarray]) -> np.ndarray:
        out = np.zeros(self.m_act)
        for af, x in zip(self.Af, X):
            out += af @ x.ravel()
        return out

    def _adj(self, y: np.ndarray) -> list[np.ndarray]:
        return [(y @ af).reshape(a.shape[1:]) for af, a in zip(self.Af, self.A)]

    @staticmethod
    def _inner(U: list[np.ndarray], V: list[np.ndarray]) -> float:
        return float(sum(np.sum(u * v) for u, v in zip(U, V)))

    @staticmethod
    def _norm(U: list[np.ndarray]) -> float:
        return float(np.sqrt(sum(np.sum(u * u) for u in U)))

    def _identity(self) -> list[np.ndarray]:
        return [np.eye(n) if k == "s" else np.ones(n) for k, n in zip(self.kinds, self.sizes)]

    def _max_step(self, X, dX, chols) -> float:
        alpha = np.inf
        for kind, x, dx, L in zip(self.kinds, X, dX, chols):
            if kind == "s":
                w = solve_triangular(L, dx, lower=True, check_finite=False)
                w = solve_triangular(L, w.T, lower=True, check_finite=False)
                lam = float(eigvalsh(_sym(w), subset_by_index=[0, 0], check_finite=False)[0])
                if lam < 0:
                    alpha = min(alpha, -1.0 / lam)
            else:
                neg = dx < 0
                if np.any(neg):
                    alpha = min(alpha, float(np.min(-x[neg] / dx[neg])))
        return alpha

    @staticmethod
    def _scalar_step(t: float, dt: float) -> float:
        return -t / dt if dt < 0 else np.inf

    def _schur_solver(self, M: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
        if self.m_act == 0:
            return lambda r: np.zeros(0)
        try:
            f = cho_factor(M, lower=True, check_finite=False)
            return lambda r: cho_solve(f, r, check_finite=False)
        except LinAlgError:
            pass
        reg = 1e-12 * max(1.0, float(np.abs(np.diag(M)).max()))
        try:
            f = cho_factor(M + reg * np.eye(M.shape[0]), lower=True, check_finite=False)
            logger.debug(f"schur matrix regularized by {reg:.1e}")
            return lambda r: cho_solve(f, r, check_finite=False)
        except LinAlgError:
            logger.debug("schur matrix singular, falling back to least squares")
            return lambda r: lstsq(M, r, check_finite=False)[0]

    # ── Main loop ────────────────────────────────────────────────────────
    def run(self) -> _RawResult:
        o = self.opts
        if np.any(self.zero_rows & (np.abs(self.raw_b) > o.feas_tol * (1 + self.norm_b))):
            logger.debug("constraint with zero coefficients and nonzero right-hand side")
            return self._terminal(INFEASIBLE, self._identity(), np.zeros(self.m_act), self._identity(), 0)

        X = self._identity()
        Z = self._identity()
        y = np.zeros(self.m_act)
        tau = kappa = 1.0
        best: Optional[tuple] = None
        stalls = 0

        for it in range(o.max_iter + 1):
            AX = self._op(X)
            rp = self.b * tau - AX
            ATy = self._adj(y)
            Rd = [c * tau - aty - z for c, aty, z in zip(self.C, ATy, Z)]
            cx = self._inner(self.C, X)
            by = float(self.b @ y)
            rg = kappa - by + cx
            mu = (self._inner(X, Z) + tau * kappa) / (self.nu + 1)

            pres = float(np.linalg.norm(self.row_norm * rp)) * self.sb / tau / (1 + self.norm_b)
            dres = self.sc * self._norm(Rd) / tau / (1 + self.norm_c)
            pobj = self.sb * self.sc * cx / tau
            dobj = self.sb * self.sc * by / tau
            gap = abs(pobj - dobj)
            merit = max(pres / o.feas_tol, dres / o.feas_tol, gap / (o.gap_tol * (1 + abs(pobj))))
            if best is None or merit < best[0]:
                best = (merit, [x.copy() for x in X], y.copy(), [z.copy() for z in Z], tau, pres, dres, pobj, dobj, gap)

            logger.debug(
                f"it {it:3d} pobj={pobj:+.9e} dobj={dobj:+.9e} pres={pres:.1e} dres={dres:.1e} "
                f"tau={tau:.1e} kappa={kappa:.1e} mu={mu:.1e}"
            )

            if pres <= o.feas_tol and dres <= o.feas_tol and gap <= o.gap_tol * (1 + abs(pobj)):
                return self._finish(OPTIMAL, X, y, Z, tau, pres, dres, pobj, dobj, gap, it)

            if tau <= kappa:
                ray = [aty + z for aty, z in zip(ATy, Z)]
                if by > 0 and self._norm(ray) / by <= o.feas_tol:
                    return self._terminal(INFEASIBLE, X, y, Z, it)
                if cx < 0 and float(np.linalg.norm(AX)) / (-cx) <= o.feas_tol:
                    return self._terminal(UNBOUNDED, X, y, Z, it)

            if it == o.max_iter:
                break

            # ── Factorizations ──────────────────────────────────────────
            Lx, Lz, Zi = [], [], []
            for kind, x, z in zip(self.kinds, X, Z):
                if kind == "s":
                    lx, lz = _chol(x), _chol(z)
                    if lx is None or lz is None:
                        logger.debug(f"iterate left the cone at iteration {it}")
                        return self._from_best(NUMERICAL, best, it)
                    Lx.append(lx)
                    Lz.append(lz)
                    Zi.append(_sym(cho_solve((lz, True), np.eye(x.shape[0]), check_finite=False)))
                else:
                    Lx.append(None)
                    Lz.append(None)
                    Zi.append(1.0 / z)

            M = np.zeros((self.m_act, self.m_act))
            g = np.zeros(self.m_act)
            c0 = 0.0
            for kind, a, af, c, x, zi in zip(self.kinds, self.A, self.Af, self.C, X, Zi):
                if kind == "s":
                    G = zi @ a @ x
                    M += af @ G.reshape(self.m_act, -1).T
                    xczi = x @ c @ zi
                    g += af @ xczi.ravel()
                    c0 += float(np.sum(c * xczi))
                else:
                    d = x * zi
                    M += (a * d) @ a.T
                    g += a @ (c * d)
                    c0 += float(np.sum(c * c * d))
            M = _sym(M)
            if not np.all(np.isfinite(M)):
                return self._from_best(NUMERICAL, best, it)
            schur = self._schur_solver(M)
            v = schur(self.b + g)
            bg = self.b - g

            def direction(eta: float, target: float, corr: Optional[list], corr_tk: float):
                H, XRZ = [], []
                for j, (kind, x, zi, rd) in enumerate(zip(self.kinds, X, Zi, Rd)):
                    if kind == "s":
                        rc = target * zi - x
                        if corr is not None:
                            rc = rc - corr[j] @ zi
                        H.append(_sym(rc))
                        XRZ.append(x @ rd @ zi)
                    else:
                        h = target * zi - x
                        if corr is not None:
                            h = h - corr[j] * zi
                        H.append(h)
                        XRZ.append(x * rd * zi)
                r1 = eta * rp - self._op(H) + eta * self._op(XRZ)
                u = schur(r1)
                r_tau = target - tau * kappa - corr_tk
                r3 = eta * rg + self._inner(self.C, H) - eta * self._inner(self.C, XRZ) + r_tau / tau
                dtau = (r3 - bg @ u) / (bg @ v + c0 + kappa / tau)
                dy = u + v * dtau
                ATdy = self._adj(dy)
                dZ = [eta * rd - atd + c * dtau for rd, atd, c in zip(Rd, ATdy, self.C)]
                dX = []
                for kind, h, x, dz, zi in zip(self.kinds, H, X, dZ, Zi):
                    dX.append(h - _sym(x @ dz @ zi) if kind == "s" else h - x * dz * zi)
                dkappa = (r_tau - kappa * dtau) / tau
                return dX, dy, dZ, dtau, dkappa

            def step_length(dX, dZ, dtau, dkappa) -> float:
                return min(
                    self._max_step(X, dX, Lx),
                    self._max_step(Z, dZ, Lz),
                    self._scalar_step(tau, dtau),
                    self._scalar_step(kappa, dkappa),
                )

            # predictor
            dXa, _, dZa, dta, dka = direction(1.0, 0.0, None, 0.0)
            alpha_a = min(1.0, step_length(dXa, dZa, dta, dka))
            mu_aff = (
                self._inner([x + alpha_a * dx for x, dx in zip(X, dXa)], [z + alpha_a * dz for z, dz in zip(Z, dZa)])
                + (tau + alpha_a * dta) * (kappa + alpha_a * dka)
            ) / (self.nu + 1)
            sigma = float(np.clip((mu_aff / mu) ** 3, 0.0, 1.0))

            # corrector
            corr = [dx @ dz if k == "s" else dx * dz for k, dx, dz in zip(self.kinds, dXa, dZa)]
            dX, dy, dZ, dtau, dkappa = direction(1.0 - sigma, sigma * mu, corr, dta * dka)
            alpha = min(1.0, o.step_fraction * step_length(dX, dZ, dtau, dkappa))
            if not np.isfinite(alpha) or alpha < 1e-10:
                stalls += 1
                if stalls >= 3:
                    logger.debug(f"step length collapsed at iteration {it}")
                    return self._from_best(NUMERICAL, best, it)
                continue
            stalls = 0

            X = [_sym(x + alpha * dx) if k == "s" else x + alpha * dx for k, x, dx in zip(self.kinds, X, dX)]
            Z = [_sym(z + alpha * dz) if k == "s" else z + alpha * dz for k, z, dz in zip(self.kinds, Z, dZ)]
            y = y + alpha * dy
            tau = tau + alpha * dtau
            kappa = kappa + alpha * dkappa

        return self._from_best(MAX_ITER, best, o.max_iter)

    # ── Unscaling ────────────────────────────────────────────────────────
    def _unscale(self, X, y, Z, tau) -> tuple[list, np.ndarray, list]:
        Xo = [self.sb * x / tau for x in X]
        Zo = [self.sc * z / tau for z in Z]
        yo = np.zeros(self.active.shape[0])
        yo[self.active] = self.sc * y / (tau * self.row_norm)
        return Xo, yo, Zo

    def _finish(self, status, X, y, Z, tau, pres, dres, pobj, dobj, gap, it) -> _RawResult:
        Xo, yo, Zo = self._unscale(X, y, Z, tau)
        return _RawResult(status, Xo, yo, Zo, pobj, dobj, pres, dres, gap, it)

    def _from_best(self, status, best, it) -> _RawResult:
        _, X, y, Z, tau, pres, dres, pobj, dobj, gap = best
        return self._finish(status, X, y, Z, tau, pres, dres, pobj, dobj, gap, it)

    def _terminal(self, status: str, X, y, Z, it) -> _RawResult:
        """Certificate of infeasibility: values are ±inf and the ray is returned unnormalized."""
        value = np.inf if status == INFEASIBLE else -np.inf
        yo = np.zeros(self.active.shape[0])
        if self.m_act:
            yo[self.active] = y
        return _RawResult(status, X, yo, Z, value, value, np.inf, np.inf, np.inf, it)


def solve(problem: SdpProblem, options: Optional[SolveOptions] = None) -> SdpSolution:
    """Solve a standard-form problem with the embedded interior-point method."""
    options = options or SolveOptions()
    start = time.perf_counter()
    if options.dump:
        dump_problem(problem)
    data = compile_problem(problem)
    raw = HsdSolver(data, options).run()
    seconds = time.perf_counter() - start

    logger.info(
        f"{problem.name}: {raw.status} after {raw.iterations} iterations, "
        f"p={raw.pobj:.10g} d={raw.dobj:.10g} gap={raw.gap:.1e} ({seconds:.2f}s)"
    )
    return SdpSolution(
        status=raw.status,
        primal_value=float(raw.pobj),
        dual_value=float(raw.dobj),
        X=decompile_blocks(problem, raw.X),
        y=raw.y,
        Z=decompile_blocks(problem, raw.Z, dual_slack=True),
        residuals=SdpResiduals(primal=raw.pres, dual=raw.dres, gap=raw.gap),
        iterations=raw.iterations,
        seconds=seconds,
        backend="embedded",
    )
