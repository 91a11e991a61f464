"""
Unit tests for channels, non-commutative graphs, GraphSpec parsing and the
Kraus-space criterion.
"""

import json

import numpy as np
import pytest

from zerocap.utils.errors import CapacityLimitError, GraphError, SpecError
from zerocap.utils.file_utils import matrix_to_json
from zerocap.services.matcore import HermitianMatrix, partial_trace, random_density, support_projector
from zerocap.services.model import (
    Channel,
    Graph,
    NCGraph,
    amplitude_damping,
    amplitude_damping_graph,
    bipartite_support,
    channel_from_choi,
    channel_from_spec,
    classical_channel,
    classical_graph,
    classical_graph_from_spec,
    confusability_graph,
    cq_channel,
    graph_from_spec,
    identity_channel,
    is_extremal,
    load_spec,
    noiseless_classical,
    ncgraph_to_spec,
    parse_spec,
    pentagon_graph,
    pure_state_channel,
    random_channel,
    two_state_channel,
    two_state_graph,
    umbrella_vectors,
    validate_kraus_space,
)


def check_kraus_is_trace_preserving(ch: Channel):
    gram = sum(k.conj().T @ k for k in ch.kraus)
    np.testing.assert_allclose(gram, np.eye(ch.d_in), atol=1e-9)


def test_amplitude_damping_is_trace_preserving():
    ch = amplitude_damping(0.3)
    check_kraus_is_trace_preserving(ch)
    assert ch.trace_preserving
    np.testing.assert_allclose(partial_trace(ch.choi, [0]).entries, np.eye(2), atol=1e-12)


def test_choi_round_trip_reproduces_action(rng):
    ch = random_channel(2, 3, 2, rng)
    back = channel_from_choi(ch.choi, 2, 3)
    rho = np.array([[0.6, 0.2j], [-0.2j, 0.4]])
    np.testing.assert_allclose(back.apply(rho), ch.apply(rho), atol=1e-10)


def test_non_trace_preserving_is_flagged_not_raised():
    ch = Channel([0.5 * np.eye(2)], 2, 2, name="lossy")
    assert not ch.trace_preserving
    assert ch.tp_deviation == pytest.approx(0.75)


def test_tensor_channel_dimensions():
    ch = identity_channel(2).tensor(amplitude_damping(0.5))
    assert (ch.d_in, ch.d_out) == (4, 4)
    check_kraus_is_trace_preserving(ch)


def test_graph_of_identity_channel_has_rank_one():
    K = NCGraph.from_kraus(identity_channel(3).kraus)
    assert K.rank == 1
    np.testing.assert_allclose(K.trace_A().entries, np.eye(3) / 3, atol=1e-12)


def test_cq_graph_rejects_non_projector():
    with pytest.raises(GraphError):
        NCGraph.from_cq([np.diag([1.0, 0.5])])


def test_tensor_product_of_graphs_respects_cap():
    K = pentagon_graph()
    K2 = K.tensor(K)
    assert (K2.d_A, K2.d_B) == (25, 9)
    assert K2.is_cq and len(K2.cq) == 25
    with pytest.raises(CapacityLimitError):
        K.power(4)


def test_confusability_graph_of_umbrella_is_pentagon():
    G = confusability_graph(pentagon_graph())
    assert G.edges == Graph.cycle(5).edges


def test_strong_product_of_pentagons():
    G = Graph.cycle(5).strong_product(Graph.cycle(5))
    assert G.n == 25
    # every vertex of C5 ⊠ C5 has degree 8
    assert set(G.adjacency().sum(axis=1)) == {8}


def test_bipartite_support_of_classical_graph():
    p = [[0.5, 0.5, 0.0], [0.0, 0.2, 0.8]]
    np.testing.assert_array_equal(bipartite_support(classical_graph(p)), [[1, 1, 0], [0, 1, 1]])


def test_is_extremal():
    assert is_extremal(NCGraph.from_kraus([np.eye(2)]))
    assert not is_extremal(NCGraph.from_kraus(amplitude_damping(0.5).kraus + (np.eye(2),)))


# ── GraphSpec ───────────────────────────────────────────────────────────
def test_spec_files_parse(specs_dir):
    for path in sorted(specs_dir.glob("*.json")):
        spec = load_spec(path)
        assert spec.type == json.loads(path.read_text())["type"]


def test_two_state_spec_channel_matches_generator():
    spec = parse_spec({"type": "two_state", "alpha_sq": 0.75})
    N = channel_from_spec(spec)
    np.testing.assert_allclose(N.choi.entries, two_state_channel(np.sqrt(0.75)).choi.entries, atol=1e-12)
    assert graph_from_spec(spec).is_cq


@pytest.mark.parametrize(
    "doc",
    [
        {"type": "two_state"},
        {"type": "two_state", "alpha_sq": 1.5},
        {"type": "cq", "vectors": [[1, 0]], "projectors": [[[1, 0], [0, 0]]]},
        {"type": "classical", "matrix": [[0.5, -0.5]]},
        {"type": "graph", "family": "cycle"},
        {"type": "tensor", "factors": []},
        {"type": "mystery"},
    ],
)
def test_invalid_specs_raise_spec_error(doc):
    with pytest.raises(SpecError):
        parse_spec(doc)


def test_graph_spec_is_not_a_channel():
    spec = parse_spec({"type": "graph", "n": 5, "family": "cycle"})
    with pytest.raises(SpecError):
        graph_from_spec(spec)
    assert classical_graph_from_spec(spec).edges == Graph.cycle(5).edges


def test_projector_only_cq_spec_has_no_channel():
    spec = parse_spec({"type": "cq", "projectors": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]})
    assert channel_from_spec(spec) is None


def test_ncgraph_spec_reparses_to_same_graph():
    for K in (pentagon_graph(), NCGraph.from_kraus(amplitude_damping(0.5).kraus)):
        again = graph_from_spec(parse_spec(ncgraph_to_spec(K)))
        assert again.same_as(K, atol=1e-10)


# ── Kraus spaces ────────────────────────────────────────────────────────
def test_span_of_identity_is_a_kraus_space():
    report = validate_kraus_space([np.eye(2)])
    assert report.valid
    np.testing.assert_allclose(report.witness.entries, [[2.0]], atol=1e-6)


def test_nilpotent_span_is_not_a_kraus_space():
    report = validate_kraus_space([np.array([[0.0, 1.0], [0.0, 0.0]])])
    assert not report.valid


def test_bare_spec_name_resolves_to_bundled_specs(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert load_spec("c5.json").type == "graph"


def test_tensor_product_of_graphs_is_associative():
    A, B, C = two_state_graph(np.sqrt(0.75)), amplitude_damping_graph(0.5), noiseless_classical(2)
    left = A.tensor(B).tensor(C)
    right = A.tensor(B.tensor(C))
    assert (left.d_A, left.d_B) == (8, 8)
    assert left.same_as(right, atol=1e-12)
    assert left.is_cq == right.is_cq


def _generated_channels(rng) -> list[Channel]:
    return [
        identity_channel(3),
        amplitude_damping(0.5),
        amplitude_damping(1.0),
        two_state_channel(np.sqrt(0.75)),
        classical_channel([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]]),
        cq_channel([random_density(3, rng, rank=2), random_density(3, rng, rank=1)]),
        pure_state_channel(umbrella_vectors()),
        random_channel(2, 3, 2, rng),
    ]


def test_kraus_spec_graph_is_the_choi_support(rng):
    for ch in _generated_channels(rng):
        spec = parse_spec({"type": "kraus", "kraus": [matrix_to_json(k) for k in ch.kraus]})
        K = graph_from_spec(spec)
        assert (K.d_A, K.d_B) == (ch.d_in, ch.d_out)
        np.testing.assert_allclose(K.P.entries, support_projector(ch.choi).entries, atol=1e-9)
