# services/nosig/__init__.py
from .correlation import (
    PORTS,
    NsCorrelation,
    NsReport,
    check_ns,
    classical_box_residuals,
    product_correlation,
    apply_correlation,
    permute_messages,
    correlation_to_json,
    correlation_from_json,
)
from .builders import build_capacity_ns, build_simulation_ns
from .compose import compose, compose_choi, compose_via_trace
from .verify import (
    CodeReport,
    SimulationReport,
    verify_code,
    verify_simulation,
    tp_deviation,
    signalling_correlation,
    signalling_witness,
)

__all__ = [
    "PORTS",
    "NsCorrelation",
    "NsReport",
    "check_ns",
    "classical_box_residuals",
    "product_correlation",
    "apply_correlation",
    "permute_messages",
    "correlation_to_json",
    "correlation_from_json",
    "build_capacity_ns",
    "build_simulation_ns",
    "compose",
    "compose_choi",
    "compose_via_trace",
    "CodeReport",
    "SimulationReport",
    "verify_code",
    "verify_simulation",
    "tp_deviation",
    "signalling_correlation",
    "signalling_witness",
]
