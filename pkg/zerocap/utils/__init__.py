# zerocap/utils/__init__.py
from .config import settings
from .logger import setup_logging
from .errors import (
    ZerocapError,
    DimensionError,
    NotHermitianError,
    NotPsdError,
    GraphError,
    SpecError,
    InfeasibleRequest,
    SolverError,
    CapacityLimitError,
    UsageError,
)
from .file_utils import read_json, write_json, matrix_to_json, matrix_from_json

__all__ = [
    "settings",
    "setup_logging",
    "ZerocapError",
    "DimensionError",
    "NotHermitianError",
    "NotPsdError",
    "GraphError",
    "SpecError",
    "InfeasibleRequest",
    "SolverError",
    "CapacityLimitError",
    "UsageError",
    "read_json",
    "write_json",
    "matrix_to_json",
    "matrix_from_json",
]
