"""
zerocap/services/model/specs.py: the GraphSpec JSON document and its loaders.

A GraphSpec names a channel, a (non-commutative) bipartite graph or a
classical graph. Complex entries are [re, im] pairs, matrices are row-major
nested lists; plain real numbers are accepted wherever a complex entry is.
"""

from __future__ import annotations

from pathlib import Path
from typing import Annotated, Any, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, TypeAdapter, ValidationError, field_validator, model_validator

from zerocap.utils.config import settings
from zerocap.utils.errors import SpecError
from zerocap.utils.file_utils import matrix_from_json, matrix_to_json, read_json
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import HermitianMatrix, support_projector
from zerocap.services.model.channels import Channel
from zerocap.services.model.graphs import Graph, NCGraph, confusability_graph
from zerocap.services.model import generators as gen

logger = setup_logging(__name__)

Matrix = list[list[Any]]
Vector = list[Any]


# ── Document models ──────────────────────────────────────────────────────
class KrausSpec(BaseModel):
    type:   Literal["kraus"]
    kraus:  list[Matrix] = Field(min_length=1)
    name:   Optional[str] = None


class CqSpec(BaseModel):
    type:        Literal["cq"]
    projectors:  Optional[list[Matrix]] = None
    states:      Optional[list[Matrix]] = None
    vectors:     Optional[list[Vector]] = None
    name:        Optional[str] = None

    @model_validator(mode="after")
    def exactly_one_payload(self) -> "CqSpec":
        given = [k for k in ("projectors", "states", "vectors") if getattr(self, k) is not None]
        if len(given) != 1:
            raise ValueError(f"cq spec needs exactly one of projectors/states/vectors, got {given or 'none'}")
        if not getattr(self, given[0]):
            raise ValueError(f"cq spec has an empty {given[0]} list")
        return self


class ClassicalSpec(BaseModel):
    """Transition matrix with rows indexed by inputs x: matrix[x][y] = N(y|x)."""
    type:    Literal["classical"]
    matrix:  list[list[float]] = Field(min_length=1)
    name:    Optional[str] = None

    @field_validator("matrix")
    @classmethod
    def rows_are_distributions(cls, v: list[list[float]]) -> list[list[float]]:
        width = len(v[0])
        if width == 0 or any(len(r) != width for r in v):
            raise ValueError("transition matrix rows must be non-empty and of equal length")
        if any(p < 0 for r in v for p in r):
            raise ValueError("transition probabilities must be nonnegative")
        return v


class GraphTypeSpec(BaseModel):
    type:    Literal["graph"]
    n:       Optional[int] = Field(default=None, ge=1)
    edges:   list[tuple[int, int]] = []
    family:  Optional[Literal["cycle", "complete", "empty"]] = None
    name:    Optional[str] = None

    @model_validator(mode="after")
    def vertex_count_known(self) -> "GraphTypeSpec":
        if self.n is None:
            raise ValueError("graph spec needs the vertex count n")
        if self.family is not None and self.edges:
            raise ValueError("give either a family or an explicit edge list, not both")
        return self


class TwoStateSpec(BaseModel):
    type:      Literal["two_state"]
    alpha:     Optional[float] = None
    alpha_sq:  Optional[float] = None

    @model_validator(mode="after")
    def alpha_in_range(self) -> "TwoStateSpec":
        if (self.alpha is None) == (self.alpha_sq is None):
            raise ValueError("two_state needs exactly one of alpha, alpha_sq")
        a = self.alpha if self.alpha is not None else float(np.sqrt(max(self.alpha_sq, 0.0)))
        if not 0.0 < a <= 1.0 or (self.alpha_sq is not None and self.alpha_sq <= 0):
            raise ValueError(f"two_state α must lie in (0, 1], got {a}")
        return self

    @property
    def value(self) -> float:
        return self.alpha if self.alpha is not None else float(np.sqrt(self.alpha_sq))


class AmplitudeDampingSpec(BaseModel):
    type:  Literal["amplitude_damping"]
    r:     float = Field(ge=0.0, le=1.0)


class NoiselessClassicalSpec(BaseModel):
    type:  Literal["noiseless_classical"]
    ell:   int = Field(ge=1)


class NoiselessQuantumSpec(BaseModel):
    type:  Literal["noiseless_quantum"]
    ell:   int = Field(ge=1)


class TensorSpec(BaseModel):
    type:     Literal["tensor"]
    factors:  list["GraphSpec"] = Field(min_length=1)
    power:    int = Field(default=1, ge=1)


GraphSpec = Annotated[
    Union[
        KrausSpec,
        CqSpec,
        ClassicalSpec,
        GraphTypeSpec,
        TwoStateSpec,
        AmplitudeDampingSpec,
        NoiselessClassicalSpec,
        NoiselessQuantumSpec,
        TensorSpec,
    ],
    Field(discriminator="type"),
]
TensorSpec.model_rebuild()
_ADAPTER = TypeAdapter(GraphSpec)


# ── Parsing ──────────────────────────────────────────────────────────────
def parse_spec(doc: Any) -> GraphSpec:
    try:
        return _ADAPTER.validate_python(doc)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        raise SpecError(f"invalid GraphSpec at {where or 'root'}: {first.get('msg')}") from e


def resolve_spec_path(path: Union[str, Path]) -> Path:
    """A bare name such as `c5.json` falls back to the bundled specs directory."""
    path = Path(path)
    if not path.exists() and not path.is_absolute() and (settings.SPECS_DIR / path).exists():
        return settings.SPECS_DIR / path
    return path


def load_spec(path: Union[str, Path]) -> GraphSpec:
    path = resolve_spec_path(path)
    spec = parse_spec(read_json(path))
    logger.debug(f"loaded {spec.type} spec from {path}")
    return spec


def spec_to_dict(spec: GraphSpec) -> dict:
    return _ADAPTER.dump_python(spec, mode="json", exclude_none=True)


def graphspec_schema() -> dict:
    schema = _ADAPTER.json_schema()
    schema["title"] = "GraphSpec"
    return schema


# ── Interpretation ───────────────────────────────────────────────────────
def _matrices(rows: list, where: str) -> list[np.ndarray]:
    return [matrix_from_json(m, f"{where}[{i}]") for i, m in enumerate(rows)]


def graph_from_spec(spec: GraphSpec) -> NCGraph:
    """NCGraph of any channel-like spec; cq structure is kept for cq and classical specs."""
    if isinstance(spec, KrausSpec):
        return NCGraph.from_kraus(_matrices(spec.kraus, "kraus"), name=spec.name)
    if isinstance(spec, CqSpec):
        if spec.projectors is not None:
            return NCGraph.from_cq(_matrices(spec.projectors, "projectors"), name=spec.name)
        if spec.states is not None:
            return NCGraph.from_cq(
                [support_projector(HermitianMatrix(s)) for s in _matrices(spec.states, "states")], name=spec.name
            )
        vectors = [matrix_from_json(v, f"vectors[{i}]", ndim=1) for i, v in enumerate(spec.vectors)]
        return NCGraph.from_cq([np.outer(v, v.conj()) / np.vdot(v, v).real for v in vectors], name=spec.name)
    if isinstance(spec, ClassicalSpec):
        return gen.classical_graph(spec.matrix)
    if isinstance(spec, TwoStateSpec):
        return gen.two_state_graph(spec.value)
    if isinstance(spec, AmplitudeDampingSpec):
        return gen.amplitude_damping_graph(spec.r)
    if isinstance(spec, NoiselessClassicalSpec):
        return gen.noiseless_classical(spec.ell)
    if isinstance(spec, NoiselessQuantumSpec):
        return gen.noiseless_quantum(spec.ell)
    if isinstance(spec, TensorSpec):
        out = graph_from_spec(spec.factors[0])
        for f in spec.factors[1:]:
            out = out.tensor(graph_from_spec(f))
        return out.power(spec.power)
    raise SpecError(f"spec of type {spec.type!r} describes a classical graph, not a channel")


def channel_from_spec(spec: GraphSpec) -> Optional[Channel]:
    """The channel a spec determines, or None (projector-only cq specs, graphs)."""
    if isinstance(spec, KrausSpec):
        return Channel(_matrices(spec.kraus, "kraus"), name=spec.name)
    if isinstance(spec, CqSpec):
        if spec.states is not None:
            return gen.cq_channel(_matrices(spec.states, "states"), name=spec.name)
        if spec.vectors is not None:
            return gen.pure_state_channel(
                [matrix_from_json(v, f"vectors[{i}]", ndim=1) for i, v in enumerate(spec.vectors)], name=spec.name
            )
        return None
    if isinstance(spec, ClassicalSpec):
        return gen.classical_channel(spec.matrix, name=spec.name)
    if isinstance(spec, TwoStateSpec):
        return gen.two_state_channel(spec.value)
    if isinstance(spec, AmplitudeDampingSpec):
        return gen.amplitude_damping(spec.r)
    if isinstance(spec, NoiselessClassicalSpec):
        return gen.classical_channel(np.eye(spec.ell), name=f"Delta_{spec.ell}")
    if isinstance(spec, NoiselessQuantumSpec):
        return gen.identity_channel(spec.ell)
    if isinstance(spec, TensorSpec):
        parts = [channel_from_spec(f) for f in spec.factors]
        if any(p is None for p in parts):
            return None
        base = parts[0]
        for p in parts[1:]:
            base = base.tensor(p)
        out = base
        for _ in range(spec.power - 1):
            out = out.tensor(base)
        return out
    return None


def classical_graph_from_spec(spec: GraphSpec) -> Graph:
    """A `graph` spec directly, or the confusability graph of a cq-type spec."""
    if isinstance(spec, GraphTypeSpec):
        if spec.family == "cycle":
            return Graph.cycle(spec.n)
        if spec.family == "complete":
            return Graph.complete(spec.n)
        if spec.family == "empty":
            return Graph.empty(spec.n)
        return Graph.from_edges(spec.n, spec.edges)
    return confusability_graph(graph_from_spec(spec))


def ncgraph_to_spec(K: NCGraph) -> dict:
    """Serialize a graph back to a GraphSpec document (projectors for cq, orthonormal Kraus basis otherwise)."""
    if K.is_cq:
        return {"type": "cq", "projectors": [matrix_to_json(p.entries) for p in K.cq], "name": K.name}
    return {"type": "kraus", "kraus": [matrix_to_json(e) for e in K.kraus_basis()], "name": K.name}
