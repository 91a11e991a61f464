"""
zerocap/services/acceptance/suite.py: the regression suite of known values.

Each criterion records its comparisons on a Tally; run_criterion turns
that into a CheckOutcome. `regress` runs them all and the tests
parametrize over CRITERIA.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np
from tqdm import tqdm

from zerocap.utils.config import settings
from zerocap.utils.constants import LP_AGREEMENT_TOL
from zerocap.utils.errors import ZerocapError
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import HermitianMatrix
from zerocap.services.model import (
    Graph,
    NCGraph,
    amplitude_damping,
    amplitude_damping_graph,
    classical_graph,
    identity_channel,
    is_extremal,
    noiseless_classical,
    noiseless_quantum,
    pentagon_graph,
    random_channel,
    random_classical_channel,
    random_cq_graph,
    two_state_channel,
    two_state_graph,
)
from zerocap.services.sdp import SolveOptions
from zerocap.services.quantities import (
    amplitude_damping_closed,
    aram,
    aram_hat,
    aram_tilde,
    binary_entropy,
    damping_cmin_e,
    feasibility,
    fractional_packing,
    lovasz_theta,
    sigma_channel,
    sigma_graph,
    superdense_bound,
    two_state_closed,
    two_state_report,
    upsilon,
    upsilon_with_noiseless,
)
from zerocap.services.nosig import signalling_correlation, signalling_witness, verify_code, verify_simulation

logger = setup_logging(__name__)


@dataclass
class SuiteContext:
    options: Optional[SolveOptions] = None
    backend: Any = None
    seed: int = field(default_factory=lambda: settings.DEFAULT_SEED)

    def rng(self, offset: int = 0) -> np.random.Generator:
        return np.random.default_rng(self.seed + offset)


@dataclass
class CheckOutcome:
    number: int
    name: str
    passed: bool
    residuals: dict[str, float] = field(default_factory=dict)
    reported: dict[str, float] = field(default_factory=dict)
    seconds: float = 0.0
    error: Optional[str] = None

    def as_dict(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "residuals": self.residuals,
            "reported": self.reported,
            "seconds": self.seconds,
            "error": self.error,
        }


class Tally:
    """Collects named comparisons; a criterion passes when every one does."""

    def __init__(self):
        self.residuals: dict[str, float] = {}
        self.reported: dict[str, float] = {}
        self.failed: list[str] = []

    def close(self, name: str, value: float, target: float, tol: float) -> None:
        err = abs(value - target)
        self.residuals[name] = err
        if not err <= tol:
            self.failed.append(name)
            logger.warning(f"{name}: got {value:.10g}, expected {target:.10g} ± {tol:g}")

    def at_most(self, name: str, value: float, bound: float) -> None:
        self.residuals[name] = value
        if not value <= bound:
            self.failed.append(name)
            logger.warning(f"{name}: {value:.3e} exceeds {bound:g}")

    def holds(self, name: str, condition: bool) -> None:
        if not condition:
            self.failed.append(name)
            logger.warning(f"{name}: does not hold")

    def report(self, name: str, value: float) -> None:
        self.reported[name] = value

    @property
    def passed(self) -> bool:
        return not self.failed


def _alpha(alpha_sq: float) -> float:
    return math.sqrt(alpha_sq)


def _relative_gap(res) -> float:
    """Primal/dual disagreement scaled to the value."""
    return res.crosscheck_gap / max(1.0, abs(res.value))


# ── 1. Two-state family, one copy ───────────────────────────────────────
def check_two_state(ctx: SuiteContext, t: Tally) -> None:
    alpha = _alpha(0.75)
    K = two_state_graph(alpha)
    N = two_state_channel(alpha)
    o, b = ctx.options, ctx.backend
    cost = 1.0 + math.sqrt(3.0) / 2.0
    t.close("upsilon", upsilon(K, options=o, backend=b).value, 1.0, 1e-6)
    t.close("aram", aram(K, options=o, backend=b).value, 4.0 / 3.0, 1e-6)
    t.close("sigma_graph", sigma_graph(K, options=o, backend=b).value, cost, 1e-6)
    t.close("sigma_channel", sigma_channel(N, options=o, backend=b).value, cost, 1e-6)
    t.close("cmin_e", two_state_closed(alpha).cmin_e, binary_entropy(0.25), 1e-9)


# ── 2. Two copies of the two-state graph ────────────────────────────────
def check_two_copies(ctx: SuiteContext, t: Tally) -> None:
    o, b = ctx.options, ctx.backend

    K = two_state_graph(_alpha((1.0 + math.sqrt(0.5)) / 2.0))
    t.close("upsilon_boundary", upsilon(K.power(2), options=o, backend=b).value, 4.0 / 3.0, 1e-5)

    alpha = _alpha(0.75)
    K = two_state_graph(alpha)
    value = upsilon(K.power(2), options=o, backend=b).value
    t.report("upsilon_075", value)
    t.holds("sandwich_lower", value >= 1.6 - 1e-6)
    t.holds("sandwich_upper", value <= 16.0 / 9.0 + 1e-6)
    rep = two_state_report(alpha, 2)
    t.close("ansatz_bound", rep.bound if rep.bound is not None else math.nan, 1.6, 1e-9)
    t.holds("ansatz_verified", bool(rep.verified))
    for key, r in rep.residuals.items():
        t.at_most(f"ansatz_{key}", r, 1e-8)

    K = two_state_graph(_alpha(0.9))
    t.close("upsilon_09", upsilon(K.power(2), options=o, backend=b).value, 1.0, 1e-6)


# ── 3. Amplitude damping at r = 0.5 ─────────────────────────────────────
def check_amplitude_damping(ctx: SuiteContext, t: Tally) -> None:
    o, b = ctx.options, ctx.backend
    r = 0.5
    K = amplitude_damping_graph(r)
    forms = amplitude_damping_closed(r)
    t.close("aram", aram(K, options=o, backend=b).value, 1.5, 1e-6)
    t.close("aram_tilde", aram_tilde(K, options=o, backend=b).value, 2.25, 1e-6)
    t.close("superdense", superdense_bound(K), 1.2, 1e-12)
    t.close("superdense_closed", forms.superdense, 1.2, 1e-12)
    t.close("cmin_e", damping_cmin_e(r), 1.0, 1e-6)
    t.holds("extremal", is_extremal(K))
    graph_cost = sigma_graph(K, options=o, backend=b).value
    channel_cost = sigma_channel(amplitude_damping(r), options=o, backend=b).value
    t.close("sigma_graph_vs_channel", graph_cost, channel_cost, 1e-6)
    t.holds("sigma_graph_lower", graph_cost >= 2.25 - 1e-6)


# ── 4. Lovász number ────────────────────────────────────────────────────
def check_lovasz(ctx: SuiteContext, t: Tally) -> None:
    o, b = ctx.options, ctx.backend
    t.close("theta_C5", lovasz_theta(Graph.cycle(5), options=o, backend=b).value, math.sqrt(5.0), 1e-5)
    t.close("theta_K4", lovasz_theta(Graph.complete(4), options=o, backend=b).value, 1.0, 1e-7)
    t.close("theta_empty4", lovasz_theta(Graph.empty(4), options=o, backend=b).value, 4.0, 1e-6)
    t.close("aram_umbrella", aram(pentagon_graph(), options=o, backend=b).value, math.sqrt(5.0), 1e-4)


# ── 5. Noiseless channels ───────────────────────────────────────────────
def check_noiseless(ctx: SuiteContext, t: Tally) -> None:
    o, b = ctx.options, ctx.backend
    for ell in (2, 3):
        K = noiseless_classical(ell)
        t.close(f"upsilon_Delta{ell}", upsilon(K, options=o, backend=b).value, ell, 1e-6)
        t.close(f"sigma_Delta{ell}", sigma_graph(K, options=o, backend=b).value, ell, 1e-6)
    t.close("upsilon_C1", upsilon(noiseless_quantum(2), options=o, backend=b).value, 4.0, 1e-6)
    t.close("sigma_id2", sigma_channel(identity_channel(2), options=o, backend=b).value, 4.0, 1e-6)

    # Υ(K⊗Δ_ℓ) ≥ ℓ·Υ(K) always; equality is only reported
    joint = upsilon_with_noiseless(two_state_graph(_alpha(0.75)), 2, options=o, backend=b)
    t.report("noiseless_ratio_two_state", joint.notes["ratio"])
    t.holds("noiseless_supermultiplicative", joint.notes["ratio"] >= 1.0 - 1e-6)


# ── 6. Classical channels ───────────────────────────────────────────────
def _typewriter(n: int) -> np.ndarray:
    p = np.zeros((n, n))
    for x in range(n):
        p[x, x] = p[x, (x + 1) % n] = 0.5
    return p


def check_classical(ctx: SuiteContext, t: Tally) -> None:
    o, b = ctx.options, ctx.backend
    rng = ctx.rng(6)
    worst, pack_cover, simplex = 0.0, 0.0, 0.0
    for k in range(20):
        nx, ny = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        p = random_classical_channel(nx, ny, rng)
        K = classical_graph(p)
        alpha_star = fractional_packing(p, options=o, backend=b)
        pack_cover = max(pack_cover, alpha_star.crosscheck_gap)
        simplex = max(simplex, alpha_star.crosschecks["simplex"])
        values = [
            upsilon(K, options=o, backend=b).value,
            sigma_graph(K, options=o, backend=b).value,
            aram(K, options=o, backend=b).value,
            alpha_star.value,
        ]
        spread = max(values) - min(values)
        worst = max(worst, spread)
        if spread > 1e-6:
            logger.warning(f"classical instance {k} ({nx}x{ny}): values {values} spread {spread:.2e}")
    t.at_most("classical_spread", worst, 1e-6)
    t.at_most("alpha_star_pack_cover", pack_cover, LP_AGREEMENT_TOL)
    t.at_most("alpha_star_simplex", simplex, LP_AGREEMENT_TOL)
    t.close("typewriter_alpha_star", fractional_packing(_typewriter(5), options=o, backend=b).value, 2.5, 1e-7)


# ── 7. Products ─────────────────────────────────────────────────────────
def check_products(ctx: SuiteContext, t: Tally) -> None:
    o, b = ctx.options, ctx.backend
    rng = ctx.rng(7)
    mult, additivity, super_slack, sub_slack = 0.0, 0.0, 0.0, 0.0
    for _ in range(10):
        K1 = random_cq_graph(2, 2, rng)
        K2 = random_cq_graph(2, 2, rng)
        K12 = K1.tensor(K2)
        s1, s2 = (sigma_graph(K, options=o, backend=b).value for K in (K1, K2))
        s12 = sigma_graph(K12, options=o, backend=b).value
        u1, u2 = (upsilon(K, options=o, backend=b).value for K in (K1, K2))
        u12 = upsilon(K12, options=o, backend=b).value
        mult = max(mult, abs(s12 - s1 * s2))
        super_slack = max(super_slack, u1 * u2 - u12)
        sub_slack = max(sub_slack, s12 - s1 * s2)

        N1 = random_channel(2, 2, 2, rng)
        N2 = random_channel(2, 2, 2, rng)
        c1, c2 = (sigma_channel(N, options=o, backend=b).value for N in (N1, N2))
        c12 = sigma_channel(N1.tensor(N2), options=o, backend=b).value
        additivity = max(additivity, abs(math.log2(c12) - math.log2(c1) - math.log2(c2)))
    t.at_most("cq_sigma_multiplicativity", mult, 1e-5)
    t.at_most("hmin_additivity", additivity, 1e-5)
    t.at_most("upsilon_supermultiplicativity", super_slack, 1e-5)
    t.at_most("sigma_submultiplicativity", sub_slack, 1e-5)


# ── 8. Primal/dual agreement of Υ, Σ, A, Ã, Â and A·Â = 1 ────────────────────────────────
def _random_suite(rng: np.random.Generator) -> list[NCGraph]:
    graphs = [random_cq_graph(int(rng.integers(2, 4)), 2, rng, max_rank=2) for _ in range(10)]
    for _ in range(10):
        ch = random_channel(2, 2, 2, rng)
        graphs.append(NCGraph.from_kraus(ch.kraus, name=ch.name))
    for _ in range(10):
        graphs.append(classical_graph(random_classical_channel(3, 3, rng)))
    return graphs


def check_duality(ctx: SuiteContext, t: Tally) -> None:
    o, b = ctx.options, ctx.backend
    worst_gap, worst_product = 0.0, 0.0
    for K in _random_suite(ctx.rng(8)):
        results = [
            upsilon(K, options=o, backend=b),
            sigma_graph(K, options=o, backend=b),
            aram(K, options=o, backend=b),
            aram_tilde(K, options=o, backend=b),
        ]
        hat = aram_hat(K, options=o, backend=b)
        results.append(hat)
        worst_gap = max(worst_gap, *(_relative_gap(r) for r in results))
        worst_product = max(worst_product, abs(results[2].value * hat.value - 1.0))
    t.at_most("primal_dual_gap", worst_gap, 1e-6)
    t.at_most("aram_times_hat", worst_product, 1e-6)


# ── 9. No-signalling end to end ─────────────────────────────────────────
def check_nosig(ctx: SuiteContext, t: Tally) -> None:
    o, b = ctx.options, ctx.backend
    code = verify_code(noiseless_quantum(2), identity_channel(2), 4, o, b)
    t.at_most("code_ns", code.ns.worst, 1e-7)
    t.at_most("code_identity", code.choi_distance, 1e-6)

    sim = verify_simulation(identity_channel(2), 4, o, b)
    t.at_most("teleport_ns", sim.ns.worst, 1e-7)
    t.at_most("teleport_choi", sim.choi_distance, 1e-6)

    two = verify_simulation(two_state_channel(_alpha(0.75)), 2, o, b)
    t.at_most("two_state_ns", two.ns.worst, 1e-7)
    t.at_most("two_state_choi", two.choi_distance, 1e-6)

    deviation, _ = signalling_witness(signalling_correlation())
    t.report("signalling_deviation", deviation)
    t.holds("signalling_breaks_tp", deviation >= 1e-3)


# ── 10. Positive capacity ───────────────────────────────────────────────
def check_feasibility(ctx: SuiteContext, t: Tally) -> None:
    for alpha in np.linspace(0.72, 0.99, 8):
        t.holds(f"two_state_{alpha:.3f}", feasibility(two_state_graph(float(alpha))).positive_capacity)

    v = np.array([1.0, 1.0j]) / math.sqrt(2.0)
    same = NCGraph.from_cq([HermitianMatrix.from_vector(v)] * 3, name="identical")
    rep = feasibility(same)
    t.holds("identical_infeasible", not rep.positive_capacity)
    cert = rep.certificate if rep.certificate is not None else np.zeros(1)
    t.close("certificate_norm", float(np.linalg.norm(cert)), 1.0, 1e-9)

    rng = ctx.rng(10)
    disagreements = 0
    for _ in range(20):
        d = int(rng.integers(2, 4))
        rep = feasibility(random_cq_graph(int(rng.integers(2, 4)), d, rng, max_rank=d))
        disagreements += int(not rep.cq_agrees)
    t.at_most("cq_general_disagreements", float(disagreements), 0.0)


# ── 11. Curves of the two-state family ──────────────────────────────────
SWEEP_BETA_SQ = tuple(round(0.05 * k, 2) for k in range(1, 10))


def check_curves(ctx: SuiteContext, t: Tally) -> None:
    o, b = ctx.options, ctx.backend
    margin = math.inf
    for beta_sq in SWEEP_BETA_SQ:
        alpha = math.sqrt(1.0 - beta_sq)
        log_a, cmin_e, log_s = two_state_closed(alpha).chain
        margin = min(margin, cmin_e - log_a, log_s - cmin_e)
        t.close(f"aram_sdp_{beta_sq}", math.log2(aram(two_state_graph(alpha), options=o, backend=b).value), log_a, 1e-6)
        t.close(f"sigma_sdp_{beta_sq}", math.log2(sigma_channel(two_state_channel(alpha), options=o, backend=b).value), log_s, 1e-6)
    t.report("chain_margin", margin)
    t.holds("strict_chain", margin >= 1e-4)

    limit = two_state_closed(math.sqrt(1.0 - 1e-8)).chain
    t.at_most("vanishing_limit", max(abs(x) for x in limit), 1e-3)


CRITERIA: list[tuple[int, str, Callable[[SuiteContext, Tally], None]]] = [
    (1, "two_state_one_copy", check_two_state),
    (2, "two_state_two_copies", check_two_copies),
    (3, "amplitude_damping", check_amplitude_damping),
    (4, "lovasz_theta", check_lovasz),
    (5, "noiseless", check_noiseless),
    (6, "classical_collapse", check_classical),
    (7, "products", check_products),
    (8, "duality", check_duality),
    (9, "nosig_end_to_end", check_nosig),
    (10, "feasibility", check_feasibility),
    (11, "two_state_curves", check_curves),
]


def run_criterion(number: int, name: str, check: Callable, ctx: SuiteContext) -> CheckOutcome:
    t0 = time.perf_counter()
    tally = Tally()
    try:
        check(ctx, tally)
    except ZerocapError as e:
        logger.error(f"criterion {name} failed with {e.one_line()}")
        return CheckOutcome(number, name, False, tally.residuals, tally.reported, time.perf_counter() - t0, e.one_line())
    outcome = CheckOutcome(number, name, tally.passed, tally.residuals, tally.reported, time.perf_counter() - t0)
    logger.info(f"criterion {number} {name}: {'pass' if outcome.passed else 'FAIL ' + str(tally.failed)} ({outcome.seconds:.1f}s)")
    return outcome


def run_suite(
    ctx: Optional[SuiteContext] = None,
    jobs: int = 1,
    only: Optional[set[int]] = None,
    progress: bool = True,
) -> list[CheckOutcome]:
    """Run the selected criteria; with jobs > 1 each criterion runs in its own worker."""
    ctx = ctx or SuiteContext()
    selected = [c for c in CRITERIA if only is None or c[0] in only]
    outcomes: list[CheckOutcome] = []
    bar = tqdm(total=len(selected), desc="regress", disable=not progress)
    if jobs <= 1:
        for number, name, check in selected:
            outcomes.append(run_criterion(number, name, check, ctx))
            bar.update(1)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(run_criterion, n, name, check, ctx) for n, name, check in selected]
            for future in as_completed(futures):
                outcomes.append(future.result())
                bar.update(1)
    bar.close()
    return sorted(outcomes, key=lambda o: o.number)
