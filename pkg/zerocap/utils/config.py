import os
from pathlib import Path
from typing import Optional
from dotenv import load_dotenv

load_dotenv()

class Settings:
    # Solver tolerances (ZEROCAP_GAP_TOL is the documented override)
    GAP_TOL: float = float(os.getenv("ZEROCAP_GAP_TOL", "1e-7"))
    FEAS_TOL: float = float(os.getenv("ZEROCAP_FEAS_TOL", "1e-8"))
    MAX_ITER: int = int(os.getenv("ZEROCAP_MAX_ITER", "200"))
    STEP_FRACTION: float = float(os.getenv("ZEROCAP_STEP_FRACTION", "0.98"))
    SDP_BACKEND: str = os.getenv("ZEROCAP_BACKEND", "embedded")

    # Linear algebra thresholds
    HERMITIAN_TOL: float = float(os.getenv("ZEROCAP_HERMITIAN_TOL", "1e-9"))
    RANK_TOL: float = float(os.getenv("ZEROCAP_RANK_TOL", "1e-9"))
    CROSSCHECK_TOL: float = float(os.getenv("ZEROCAP_CROSSCHECK_TOL", "1e-6"))

    # Desk-scale caps
    MAX_TENSOR_POWER: int = int(os.getenv("ZEROCAP_MAX_POWER", "3"))
    MAX_STATE_DIM: int = int(os.getenv("ZEROCAP_MAX_DIM", "4096"))

    # Application
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    LOG_FILE: Optional[str] = os.getenv("ZEROCAP_LOG_FILE")
    DUMP_DIR: Optional[str] = os.getenv("ZEROCAP_DUMP_DIR")
    REGRESS_JOBS: int = int(os.getenv("ZEROCAP_JOBS", "1"))
    DEFAULT_SEED: int = int(os.getenv("ZEROCAP_SEED", "20140509"))
    VERBOSE: bool = os.getenv("ZEROCAP_VERBOSE", "false").lower() == "true"

    # Paths - BASE_DIR = repository root
    BASE_DIR = Path(__file__).parent.parent.parent
    SPECS_DIR = Path(os.getenv("ZEROCAP_SPECS_DIR", str(BASE_DIR / "specs")))
    SCHEMA_PATH = BASE_DIR / "schema" / "graphspec.schema.json"


settings = Settings()
