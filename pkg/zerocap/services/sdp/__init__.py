# services/sdp/__init__.py
from .problem import (
    DIAGONAL,
    HERMITIAN,
    SdpBlock,
    SdpEquality,
    SdpProblem,
    SdpResiduals,
    SdpSolution,
    compile_problem,
    dump_problem,
    measure_residuals,
)
from .solver import SolveOptions, solve
from .lmi import Affine, LmiProgram, LmiResult, dot, inner, kron, partial_trace, trace
from .backends import get_backend

__all__ = [
    "DIAGONAL",
    "HERMITIAN",
    "SdpBlock",
    "SdpEquality",
    "SdpProblem",
    "SdpResiduals",
    "SdpSolution",
    "compile_problem",
    "dump_problem",
    "measure_residuals",
    "SolveOptions",
    "solve",
    "Affine",
    "LmiProgram",
    "LmiResult",
    "dot",
    "inner",
    "kron",
    "partial_trace",
    "trace",
    "get_backend",
]
