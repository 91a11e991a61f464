"""
Values of the capacity, cost and packing programs on graphs whose answers
are known in closed form.
"""

import math

import numpy as np
import pytest

from zerocap.utils.config import settings
from zerocap.utils.constants import LP_AGREEMENT_TOL, OPTIMAL
from zerocap.utils.errors import GraphError, InfeasibleRequest, SpecError
from zerocap.services.model import (
    Graph,
    NCGraph,
    amplitude_damping,
    classical_graph,
    identity_channel,
    noiseless_classical,
    parse_spec,
    random_channel,
    random_cq_graph,
    two_state_channel,
    two_state_graph,
    umbrella_vectors,
)
from zerocap.services.matcore import HermitianMatrix
from zerocap.services.quantities import (
    FLOOR,
    QuantityResult,
    amplitude_damping_closed,
    aram,
    aram_hat,
    aram_kraus,
    aram_product,
    aram_tilde,
    binary_entropy,
    closed_form,
    cmin_e_closed,
    damping_cmin_e,
    f_max,
    feasibility,
    fractional_packing,
    fractional_packing_lp,
    lovasz_theta,
    or_value,
    sigma_channel,
    sigma_graph,
    superdense_bound,
    two_state_closed,
    two_state_general,
    two_state_report,
    upsilon,
    upsilon_witness,
    upsilon_with_noiseless,
)

TOL = 1e-6
ALPHA_075 = math.sqrt(0.75)
TYPEWRITER5 = [[0.5 if y in (x, (x + 1) % 5) else 0.0 for y in range(5)] for x in range(5)]


# ── Two-state family ────────────────────────────────────────────────────
def test_two_state_one_copy(two_state_075):
    ups = upsilon(two_state_075)
    assert ups.value == pytest.approx(1.0, abs=TOL)
    assert ups.integer_part == 1
    assert ups.notes["path"] == "cq"
    assert aram(two_state_075).value == pytest.approx(4.0 / 3.0, abs=TOL)
    cost = 1.0 + math.sqrt(3.0) / 2.0
    assert sigma_graph(two_state_075).value == pytest.approx(cost, abs=TOL)
    assert sigma_channel(two_state_channel(ALPHA_075)).value == pytest.approx(cost, abs=TOL)


def test_dump_dir_captures_both_programs(two_state_075, monkeypatch, tmp_path):
    monkeypatch.setattr(settings, "DUMP_DIR", str(tmp_path))
    upsilon(two_state_075)
    dumps = list(tmp_path.glob("*.sdp.txt"))
    assert len(dumps) >= 2
    assert all(p.read_text().startswith("# problem ") for p in dumps)


def test_two_state_full_formulation_matches_cq(two_state_075):
    full = upsilon(two_state_075, use_cq=False)
    assert full.notes["path"] == "full"
    assert full.value == pytest.approx(upsilon(two_state_075).value, abs=TOL)


def test_two_state_closed_forms():
    forms = two_state_closed(ALPHA_075)
    assert forms.overlap == pytest.approx(0.5)
    assert forms.upsilon == 1.0
    assert forms.aram == pytest.approx(4.0 / 3.0)
    assert forms.cmin_e == pytest.approx(binary_entropy(0.25), abs=1e-12)
    log_a, cmin_e, log_s = forms.chain
    assert log_a < cmin_e < log_s


def test_orthogonal_two_state_is_noiseless_bit():
    forms = two_state_closed(math.sqrt(0.5))
    assert forms.upsilon == 2.0
    assert forms.sigma == pytest.approx(2.0)


def test_f_max_of_orthogonal_and_overlapping_supports():
    assert f_max(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == pytest.approx(0.0)
    plus = np.full((2, 2), 0.5)
    assert f_max(np.diag([1.0, 0.0]), plus) == pytest.approx(math.sqrt(0.5))
    with pytest.raises(GraphError):
        f_max(np.diag([1.0, 0.5]), plus)


def test_general_two_output_forms_match_the_programs(rng):
    v0 = rng.normal(size=3) + 1j * rng.normal(size=3)
    v1 = rng.normal(size=3) + 1j * rng.normal(size=3)
    P0, P1 = HermitianMatrix.from_vector(v0, normalize=True), HermitianMatrix.from_vector(v1, normalize=True)
    forms = two_state_general(P0, P1)
    assert forms.overlap == pytest.approx(abs(np.vdot(v0, v1)) / (np.linalg.norm(v0) * np.linalg.norm(v1)))
    K = NCGraph.from_cq([P0, P1])
    assert aram(K).value == pytest.approx(forms.aram, abs=TOL)
    assert sigma_graph(K).value == pytest.approx(forms.sigma, abs=TOL)
    assert upsilon(K).value == pytest.approx(forms.upsilon, abs=TOL)


def test_general_forms_reduce_to_the_two_state_family():
    for alpha in (0.3, math.sqrt(0.5), ALPHA_075, 1.0):
        K = two_state_graph(alpha)
        assert two_state_general(*K.cq).as_dict() == pytest.approx(two_state_closed(alpha).as_dict(), abs=1e-12)


def test_cmin_e_closed_dispatches_on_spec_type():
    two_state = parse_spec({"type": "two_state", "alpha_sq": 0.75})
    assert cmin_e_closed(two_state) == pytest.approx(binary_entropy(0.25), abs=1e-12)
    damping = parse_spec({"type": "amplitude_damping", "r": 0.5})
    assert cmin_e_closed(damping) == pytest.approx(damping_cmin_e(0.5), abs=1e-12)
    assert cmin_e_closed(damping) == pytest.approx(amplitude_damping_closed(0.5).cmin_e, abs=1e-12)
    with pytest.raises(SpecError):
        cmin_e_closed(parse_spec({"type": "noiseless_classical", "ell": 2}))


def test_two_copy_ansatz_at_075():
    report = two_state_report(ALPHA_075, 2)
    assert report.condition_holds
    assert report.bound == pytest.approx(1.6)
    assert report.verified
    assert max(report.residuals.values()) <= 1e-8


def test_ansatz_condition_fails_for_large_overlap():
    # α² = 0.9: α² − β² = 0.8 > √(1/2)
    report = two_state_report(math.sqrt(0.9), 2)
    assert not report.condition_holds
    assert report.bound is None


def test_two_copies_above_threshold_send_one_message():
    K = two_state_graph(math.sqrt(0.9))
    assert upsilon(K.power(2)).value == pytest.approx(1.0, abs=1e-6)


# ── Amplitude damping ───────────────────────────────────────────────────
def test_amplitude_damping_packing(damping_05):
    closed = amplitude_damping_closed(0.5)
    assert aram(damping_05).value == pytest.approx(closed.aram, abs=TOL)
    assert aram_tilde(damping_05).value == pytest.approx(closed.aram_tilde, abs=TOL)
    assert superdense_bound(damping_05) == pytest.approx(1.2, abs=1e-12)
    assert closed.cmin_e == pytest.approx(1.0, abs=TOL)


def test_amplitude_damping_cost_is_the_channel_cost(damping_05):
    graph_cost = sigma_graph(damping_05).value
    assert graph_cost == pytest.approx(sigma_channel(amplitude_damping(0.5)).value, abs=TOL)
    assert graph_cost >= 2.25 - TOL


# ── Noiseless channels ──────────────────────────────────────────────────
@pytest.mark.parametrize("ell", [2, 3])
def test_noiseless_classical(ell):
    K = noiseless_classical(ell)
    assert upsilon(K).value == pytest.approx(ell, abs=TOL)
    assert sigma_graph(K).value == pytest.approx(ell, abs=TOL)


def test_noiseless_qubit(qubit_identity_graph):
    ups = upsilon(qubit_identity_graph)
    assert ups.value == pytest.approx(4.0, abs=TOL)
    assert ups.rounding == FLOOR
    assert sigma_channel(identity_channel(2)).value == pytest.approx(4.0, abs=TOL)
    assert superdense_bound(qubit_identity_graph) == pytest.approx(4.0)


def test_witness_for_too_many_messages(delta3):
    with pytest.raises(InfeasibleRequest):
        upsilon_witness(delta3, 4)
    S, E = upsilon_witness(delta3, 2)
    assert S.trace() == pytest.approx(2.0, abs=1e-6)


# ── Packing numbers and α* ──────────────────────────────────────────────
def test_typewriter_fractional_packing():
    assert fractional_packing(TYPEWRITER5).value == pytest.approx(2.5, abs=1e-7)
    assert fractional_packing_lp((np.asarray(TYPEWRITER5) > 0).astype(float)) == pytest.approx(2.5, abs=1e-9)


def test_typewriter_lps_agree_to_the_lp_tolerance():
    res = fractional_packing(TYPEWRITER5)
    assert res.tolerance == LP_AGREEMENT_TOL
    assert res.crosscheck_gap <= LP_AGREEMENT_TOL
    assert res.crosschecks["simplex"] <= LP_AGREEMENT_TOL
    assert res.ok


def test_simplex_disagreement_fails_the_result():
    res = QuantityResult("alpha_star", 2.5, 2.5, 2.5, tolerance=LP_AGREEMENT_TOL, crosschecks={"simplex": 1e-6})
    assert res.status == OPTIMAL
    assert res.crosscheck_gap == 0.0
    assert not res.ok
    res.crosschecks["simplex"] = 1e-8
    assert res.ok


def test_aram_tilde_primal_and_dual_agree(rng):
    for K in (random_cq_graph(3, 2, rng), NCGraph.from_kraus(random_channel(2, 2, 2, rng).kraus)):
        res = aram_tilde(K)
        assert res.status == OPTIMAL
        assert res.crosscheck_gap <= 1e-5 * (1 + res.value)
        assert res.ok


def test_noiseless_extension_of_two_state(two_state_075):
    res = upsilon_with_noiseless(two_state_075, 2)
    assert res.quantity == "upsilon_with_noiseless"
    assert res.value >= 2.0 - TOL
    assert res.notes["ratio"] == pytest.approx(res.value / 2.0, rel=1e-6)
    assert res.notes["upsilon_K"] == pytest.approx(1.0, abs=TOL)
    assert res.notes["ratio"] >= 1.0 - 1e-6


def test_classical_graph_quantities_collapse():
    p = [[0.7, 0.3, 0.0], [0.0, 0.4, 0.6], [0.0, 0.0, 1.0]]
    K = classical_graph(p)
    alpha_star = fractional_packing(K).value
    assert upsilon(K).value == pytest.approx(alpha_star, abs=TOL)
    assert aram(K).value == pytest.approx(alpha_star, abs=TOL)
    assert sigma_graph(K).value == pytest.approx(alpha_star, abs=TOL)
    assert alpha_star == pytest.approx(2.0, abs=TOL)


def test_fractional_packing_rejects_isolated_input():
    with pytest.raises(GraphError):
        fractional_packing([[1, 0], [0, 0]])


def test_aram_times_aram_hat_is_one(rng):
    K = random_cq_graph(3, 2, rng)
    _, _, product = aram_product(K)
    assert product == pytest.approx(1.0, abs=TOL)


def test_kraus_form_of_aram(damping_05):
    assert aram_kraus(damping_05).value == pytest.approx(aram(damping_05).value, abs=TOL)


def test_or_value_of_orthonormal_basis():
    res = or_value([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    assert res.value == pytest.approx(0.5, abs=TOL)


def test_sigma_is_multiplicative_on_cq_pair(rng):
    K1, K2 = random_cq_graph(2, 2, rng), random_cq_graph(2, 2, rng)
    joint = sigma_graph(K1.tensor(K2)).value
    assert joint == pytest.approx(sigma_graph(K1).value * sigma_graph(K2).value, abs=1e-5)


# ── Lovász number ───────────────────────────────────────────────────────
def test_theta_of_pentagon_and_its_representation():
    res = lovasz_theta(Graph.cycle(5), representation=umbrella_vectors())
    assert res.value == pytest.approx(math.sqrt(5.0), abs=1e-5)
    assert res.notes["representation_aram"] == pytest.approx(math.sqrt(5.0), abs=1e-4)


@pytest.mark.parametrize("n", [3, 4])
def test_theta_of_complete_and_empty(n):
    assert lovasz_theta(Graph.complete(n)).value == pytest.approx(1.0, abs=1e-7)
    assert lovasz_theta(Graph.empty(n)).value == pytest.approx(n, abs=1e-6)


def test_theta_rejects_wrong_representation():
    with pytest.raises(GraphError):
        lovasz_theta(Graph.cycle(5), representation=[np.eye(3)[k % 3] for k in range(5)])


# ── Feasibility ─────────────────────────────────────────────────────────
def test_two_state_is_feasible(two_state_075):
    report = feasibility(two_state_075)
    assert report.positive_capacity
    assert report.cq_agrees


def test_identical_supports_are_infeasible():
    p = HermitianMatrix(np.diag([1.0, 0.0]))
    report = feasibility(NCGraph.from_cq([p, p]))
    assert not report.positive_capacity
    assert report.cq_agrees
    assert np.linalg.norm(report.certificate) == pytest.approx(1.0)


# ── Results ─────────────────────────────────────────────────────────────
def test_integer_part_snaps_near_integers():
    assert closed_form("upsilon", 2.9999999, rounding=FLOOR).integer_part == 3
    assert closed_form("upsilon", 2.5, rounding=FLOOR).integer_part == 2
    assert closed_form("sigma_graph", 2.5, rounding="ceil").integer_part == 3
    assert closed_form("theta", 2.5).integer_part is None


def test_result_summary_is_flat():
    res = QuantityResult("aram", 2.0, 2.0, 2.0, notes={"path": "cq", "matrix": np.eye(2)})
    summary = res.summary()
    assert summary["bits"] == pytest.approx(1.0)
    assert summary["path"] == "cq"
    assert "matrix" not in summary
