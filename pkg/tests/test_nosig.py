"""
Tests for no-signalling correlations: the linear checks, composition with a
channel and the codes and simulations built from the optimal programs.
"""

import json
import math

import numpy as np
import pytest

from zerocap.utils.errors import DimensionError, InfeasibleRequest
from zerocap.services.model import (
    Channel,
    amplitude_damping,
    channel_from_choi,
    identity_channel,
    noiseless_classical,
    noiseless_quantum,
    random_channel,
    two_state_channel,
    two_state_graph,
)
from zerocap.services.matcore import permute
from zerocap.services.nosig import (
    NsCorrelation,
    build_capacity_ns,
    build_simulation_ns,
    check_ns,
    classical_box_residuals,
    compose,
    compose_choi,
    compose_via_trace,
    correlation_from_json,
    correlation_to_json,
    permute_messages,
    product_correlation,
    signalling_correlation,
    signalling_witness,
    verify_code,
    verify_simulation,
)


def _pr_box() -> np.ndarray:
    Q = np.zeros((2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            for a in range(2):
                Q[x, y, a, a ^ (x & y)] = 0.5
    return Q


# ── Linear checks ───────────────────────────────────────────────────────
def test_product_of_channels_is_no_signalling(rng):
    corr = product_correlation(random_channel(2, 2, 2, rng), amplitude_damping(0.3))
    report = check_ns(corr)
    assert report.ok
    assert report.worst <= 1e-9


def test_pr_box_is_no_signalling():
    Q = _pr_box()
    residuals = classical_box_residuals(Q)
    assert max(residuals.values()) <= 1e-12
    assert check_ns(NsCorrelation.from_classical_box(Q)).ok


def test_loopback_box_signals_from_bob_to_alice():
    corr = signalling_correlation()
    report = check_ns(corr)
    assert not report.passed["b_to_a"]
    assert report.passed["a_to_b"]


def test_mixture_stays_no_signalling():
    pr = NsCorrelation.from_classical_box(_pr_box(), name="pr")
    white = NsCorrelation.from_classical_box(np.full((2, 2, 2, 2), 0.25), name="white")
    assert check_ns(pr.mix(white, 0.3)).ok


def test_correlation_needs_four_ports():
    with pytest.raises(DimensionError):
        NsCorrelation(np.eye(4), (2, 2))


# ── Composition ─────────────────────────────────────────────────────────
def test_composition_forms_agree(rng):
    corr = product_correlation(random_channel(2, 3, 2, rng), random_channel(2, 2, 2, rng))
    N = random_channel(3, 2, 2, rng)
    np.testing.assert_allclose(compose_choi(corr, N).entries, compose_via_trace(corr, N).entries, atol=1e-10)


def test_product_composition_is_the_chain(rng):
    first, last = random_channel(2, 2, 2, rng), random_channel(2, 2, 2, rng)
    middle = amplitude_damping(0.4)
    composed = compose(product_correlation(first, last), middle)
    expected = first.then(middle).then(last)
    np.testing.assert_allclose(composed.choi.entries, expected.choi.entries, atol=1e-10)
    assert composed.trace_preserving


def _one_way_correlation(rng, dAi=2, dAo=2, dm=2, dBi=2, dBo=2) -> NsCorrelation:
    """Alice acts first and passes a dm-dim memory to Bob: B cannot signal to A."""
    alice = random_channel(dAi, dAo * dm, 2, rng)
    bob = random_channel(dm * dBi, dBo, 2, rng)
    kraus = [
        np.kron(np.eye(dAo), f) @ np.kron(e, np.eye(dBi))
        for e in alice.kraus
        for f in bob.kraus
    ]
    joint = Channel(kraus, dAi * dBi, dAo * dBo, name="one_way")
    omega = permute(joint.choi.with_factors((dAi, dBi, dAo, dBo)), [0, 2, 1, 3])
    return NsCorrelation(omega, (dAi, dAo, dBi, dBo), name="one_way")


def test_composition_is_linear_in_both_arguments(rng):
    a = _one_way_correlation(rng)
    b = product_correlation(random_channel(2, 2, 2, rng), random_channel(2, 2, 3, rng))
    M, N = random_channel(2, 2, 2, rng), amplitude_damping(0.3)
    w = 0.35
    mixed = compose_choi(a.mix(b, w), M).entries
    np.testing.assert_allclose(mixed, w * compose_choi(a, M).entries + (1 - w) * compose_choi(b, M).entries, atol=1e-10)
    blend = channel_from_choi(w * M.choi.entries + (1 - w) * N.choi.entries, 2, 2)
    mixed = compose_choi(a, blend).entries
    np.testing.assert_allclose(mixed, w * compose_choi(a, M).entries + (1 - w) * compose_choi(a, N).entries, atol=1e-10)


def test_one_way_correlation_composes_to_a_channel(rng):
    for _ in range(3):
        corr = _one_way_correlation(rng)
        assert check_ns(corr).passed["b_to_a"]
        out = compose(corr, random_channel(2, 2, 3, rng))
        assert out.trace_preserving
        assert out.tp_deviation <= 1e-8
        assert out.choi.eigvals[0] >= -1e-9


def test_composition_checks_channel_dimensions():
    corr = product_correlation(identity_channel(2), identity_channel(2))
    with pytest.raises(DimensionError):
        compose_choi(corr, identity_channel(3))


def test_signalling_counterexample_breaks_trace_preservation():
    deviation, channel = signalling_witness(signalling_correlation())
    assert deviation >= 1e-3
    assert channel is not None


# ── Codes ───────────────────────────────────────────────────────────────
def test_superdense_code_through_the_qubit():
    K = noiseless_quantum(2)
    corr = build_capacity_ns(K, 4)
    assert corr.dims == (4, 2, 2, 4)
    assert check_ns(corr).worst <= 1e-7

    report = verify_code(K, identity_channel(2), 4)
    assert report.ok
    assert report.choi_distance <= 1e-6
    np.testing.assert_allclose(report.transition, np.eye(4), atol=1e-6)
    assert report.trace_form_distance <= 1e-8


def test_noiseless_code_survives_message_relabelling():
    K = noiseless_classical(3)
    corr = build_capacity_ns(K, 3)
    shuffled = permute_messages(corr, [2, 0, 1])
    assert check_ns(shuffled).ok
    C = compose_choi(shuffled, identity_channel(3))
    transition = np.real(np.einsum("mpmp->mp", C.entries.reshape(3, 3, 3, 3)))
    np.testing.assert_allclose(transition, np.eye(3), atol=1e-6)


def test_single_message_is_the_trivial_code():
    K = two_state_graph(math.sqrt(0.75))
    report = verify_code(K, two_state_channel(math.sqrt(0.75)), 1)
    assert report.ok
    assert report.notes["trivial"]


def test_too_many_messages_is_infeasible():
    with pytest.raises(InfeasibleRequest):
        build_capacity_ns(two_state_graph(math.sqrt(0.75)), 2)


# ── Simulations ─────────────────────────────────────────────────────────
def test_teleportation_from_four_messages():
    report = verify_simulation(identity_channel(2), 4)
    assert report.ok
    assert report.ns.worst <= 1e-7
    assert report.tp_deviation <= 1e-6


def test_two_state_channel_from_two_messages():
    N = two_state_channel(math.sqrt(0.75))
    report = verify_simulation(N, 2)
    assert report.ok
    assert report.choi_distance <= 1e-6


def test_simulation_below_cost_is_infeasible():
    with pytest.raises(InfeasibleRequest):
        build_simulation_ns(identity_channel(2), 3)


def test_one_message_only_simulates_constant_channels():
    with pytest.raises(InfeasibleRequest):
        build_simulation_ns(identity_channel(2), 1)


def test_correlation_json_reparses():
    corr = build_simulation_ns(identity_channel(2), 4)
    again = correlation_from_json(json.loads(json.dumps(correlation_to_json(corr))))
    assert again.dims == corr.dims
    np.testing.assert_allclose(again.omega.entries, corr.omega.entries, atol=1e-12)
