import sys
from pathlib import Path

import numpy as np
import pytest

# Repository root on the path, as the run scripts do
ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from zerocap.services.model import (  # noqa: E402
    amplitude_damping_graph,
    noiseless_classical,
    noiseless_quantum,
    two_state_graph,
)

SPECS_DIR = ROOT / "specs"


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def specs_dir() -> Path:
    return SPECS_DIR


@pytest.fixture
def two_state_075():
    return two_state_graph(np.sqrt(0.75))


@pytest.fixture
def damping_05():
    return amplitude_damping_graph(0.5)


@pytest.fixture
def delta3():
    return noiseless_classical(3)


@pytest.fixture
def qubit_identity_graph():
    return noiseless_quantum(2)
