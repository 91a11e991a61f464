"""
zerocap/services/sdp/backends.py: solver backends behind one interface.

"embedded" is the in-tree interior-point method. "cvxpy" hands the same
standard-form problem to whatever conic solver cvxpy has installed; it is an
optional cross-check and is only imported when asked for.
"""

from __future__ import annotations

import time
from typing import Optional, Protocol

import numpy as np

from zerocap.utils.config import settings
from zerocap.utils.constants import INFEASIBLE, MAX_ITER, NUMERICAL, OPTIMAL, UNBOUNDED
from zerocap.utils.errors import SolverError
from zerocap.utils.logger import setup_logging
from zerocap.services.sdp.problem import HERMITIAN, SdpProblem, SdpResiduals, SdpSolution, dump_problem, measure_residuals
from zerocap.services.sdp.solver import SolveOptions, solve

logger = setup_logging(__name__)


class SolverBackend(Protocol):
    name: str

    def solve(self, problem: SdpProblem, options: Optional[SolveOptions] = None) -> SdpSolution:
        ...


class EmbeddedBackend:
    name = "embedded"

    def solve(self, problem: SdpProblem, options: Optional[SolveOptions] = None) -> SdpSolution:
        return solve(problem, options)


class CvxpyBackend:
    name = "cvxpy"

    _STATUS = {
        "optimal": OPTIMAL,
        "optimal_inaccurate": MAX_ITER,
        "infeasible": INFEASIBLE,
        "infeasible_inaccurate": INFEASIBLE,
        "unbounded": UNBOUNDED,
        "unbounded_inaccurate": UNBOUNDED,
    }

    def __init__(self):
        try:
            import cvxpy as cp
        except ImportError as e:
            raise SolverError("the cvxpy backend needs the optional cvxpy package") from e
        self.cp = cp

    def solve(self, problem: SdpProblem, options: Optional[SolveOptions] = None) -> SdpSolution:
        cp = self.cp
        options = options or SolveOptions()
        start = time.perf_counter()
        if options.dump:
            dump_problem(problem)

        variables, cons, objective = {}, [], 0
        for blk in problem.blocks:
            if blk.kind == HERMITIAN:
                v = cp.Variable((blk.dim, blk.dim), hermitian=True)
                cons.append(v >> 0)
                objective = objective + cp.real(cp.trace(problem.objective_of(blk) @ v))
            else:
                v = cp.Variable(blk.dim, nonneg=True)
                objective = objective + np.real(problem.objective_of(blk)) @ v
            variables[blk.label] = v

        eqs = []
        for k in range(problem.num_equalities):
            lhs = 0
            for blk in problem.blocks:
                coeff = problem.stacks[blk.label][k]
                if not np.any(coeff):
                    continue
                v = variables[blk.label]
                if blk.kind == HERMITIAN:
                    lhs = lhs + cp.real(cp.trace(coeff @ v))
                else:
                    lhs = lhs + np.real(coeff) @ v
            eqs.append(lhs == problem.rhs[k])
        prob = cp.Problem(cp.Minimize(objective), cons + eqs)
        try:
            prob.solve()
        except cp.error.SolverError as e:
            raise SolverError(f"cvxpy failed on {problem.name}: {e}") from e

        status = self._STATUS.get(prob.status, NUMERICAL)
        value = float(prob.value) if prob.value is not None else np.nan
        y = np.array([float(np.real(c.dual_value)) if c.dual_value is not None else 0.0 for c in eqs])
        X = {
            label: np.asarray(v.value) if v.value is not None else np.zeros(v.shape)
            for label, v in variables.items()
        }
        slack = {}
        for blk in problem.blocks:
            z = problem.objective_of(blk) - np.tensordot(y, problem.stacks[blk.label], axes=1)
            slack[blk.label] = z if blk.kind == HERMITIAN else np.real(z)
        dual_value = float(problem.rhs @ y) if status == OPTIMAL else value
        solved = all(v.value is not None for v in variables.values())
        residuals = measure_residuals(problem, X, slack, value, dual_value) if solved else SdpResiduals()
        logger.info(
            f"{problem.name}: {status} via cvxpy, p={value:.10g} d={dual_value:.10g} "
            f"pres={residuals.primal:.1e} dres={residuals.dual:.1e} ({time.perf_counter() - start:.2f}s)"
        )
        return SdpSolution(
            status=status,
            primal_value=value,
            dual_value=dual_value,
            X=X,
            y=y,
            Z=slack,
            residuals=residuals,
            iterations=0,
            seconds=time.perf_counter() - start,
            backend=self.name,
        )


_BACKENDS = {"embedded": EmbeddedBackend, "cvxpy": CvxpyBackend}


def get_backend(name: Optional[str] = None) -> SolverBackend:
    """Backend by name; None picks the configured default (ZEROCAP_BACKEND)."""
    if name is not None and not isinstance(name, str):
        return name
    name = (name or settings.SDP_BACKEND).lower()
    try:
        return _BACKENDS[name]()
    except KeyError:
        raise SolverError(f"unknown SDP backend {name!r}; choose one of {sorted(_BACKENDS)}") from None
