# services/model/__init__.py
from .channels import Channel, choi_from_kraus, channel_from_choi, choi_vector
from .graphs import NCGraph, Graph, confusability_graph, is_extremal, bipartite_support
from .generators import (
    identity_channel,
    amplitude_damping,
    classical_channel,
    cq_channel,
    pure_state_channel,
    constant_channel,
    two_state_vectors,
    two_state_channel,
    umbrella_vectors,
    two_state_graph,
    pentagon_graph,
    noiseless_classical,
    noiseless_quantum,
    amplitude_damping_graph,
    classical_graph,
    random_channel,
    random_classical_channel,
    random_cq_states,
    random_cq_graph,
)
from .kraus_space import KrausSpaceReport, validate_kraus_space
from .specs import (
    GraphSpec,
    parse_spec,
    load_spec,
    spec_to_dict,
    graphspec_schema,
    graph_from_spec,
    channel_from_spec,
    classical_graph_from_spec,
    ncgraph_to_spec,
)

__all__ = [
    "Channel",
    "choi_from_kraus",
    "channel_from_choi",
    "choi_vector",
    "NCGraph",
    "Graph",
    "confusability_graph",
    "is_extremal",
    "bipartite_support",
    "identity_channel",
    "amplitude_damping",
    "classical_channel",
    "cq_channel",
    "pure_state_channel",
    "constant_channel",
    "two_state_vectors",
    "two_state_channel",
    "umbrella_vectors",
    "two_state_graph",
    "pentagon_graph",
    "noiseless_classical",
    "noiseless_quantum",
    "amplitude_damping_graph",
    "classical_graph",
    "random_channel",
    "random_classical_channel",
    "random_cq_states",
    "random_cq_graph",
    "KrausSpaceReport",
    "validate_kraus_space",
    "GraphSpec",
    "parse_spec",
    "load_spec",
    "spec_to_dict",
    "graphspec_schema",
    "graph_from_spec",
    "channel_from_spec",
    "classical_graph_from_spec",
    "ncgraph_to_spec",
]
