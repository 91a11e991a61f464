import json
from pathlib import Path
from typing import Any, Union

import numpy as np

from .errors import SpecError


def ensure_directory(path: Path) -> Path:
    """Ensure directory exists"""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def read_json(path: Union[str, Path]) -> Any:
    """Load a JSON document, turning I/O and decode failures into SpecError."""
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as e:
        raise SpecError(f"spec file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise SpecError(f"invalid JSON in {path.name}: line {e.lineno}: {e.msg}") from e


def write_json(path: Union[str, Path], payload: Any) -> Path:
    path = Path(path)
    if path.parent != Path(""):
        ensure_directory(path.parent)
    with path.open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return path


def complex_to_json(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def matrix_to_json(m: np.ndarray) -> list:
    """Row-major nested list of [re, im] pairs."""
    m = np.asarray(m)
    if m.ndim == 1:
        return [complex_to_json(z) for z in m]
    return [[complex_to_json(z) for z in row] for row in m]


def _entry(value: Any, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise SpecError(f"{where}: complex entries must be [re, im] pairs, got {value!r}")


def matrix_from_json(rows: Any, where: str = "matrix", ndim: int = 2) -> np.ndarray:
    """Inverse of matrix_to_json; plain real numbers are accepted as entries too."""
    if not isinstance(rows, (list, tuple)) or not rows:
        raise SpecError(f"{where}: expected a non-empty nested list")
    if ndim == 1:
        return np.array([_entry(v, where) for v in rows], dtype=complex)
    if not all(isinstance(r, (list, tuple)) for r in rows):
        raise SpecError(f"{where}: expected a list of rows")
    width = len(rows[0])
    if width == 0 or any(len(r) != width for r in rows):
        raise SpecError(f"{where}: ragged rows")
    return np.array([[_entry(v, where) for v in r] for r in rows], dtype=complex)
