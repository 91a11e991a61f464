#!/usr/bin/env python3
"""
Launcher for the zerocap command line.

Usage:
    python3 run_zerocap.py capacity specs/two_state_075.json
    python3 run_zerocap.py theta specs/c5.json --json
    python3 run_zerocap.py regress --jobs 4
"""
import sys
from pathlib import Path

# ── Path setup ───────────────────────────────────────────────────────────
PROJECT_ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(PROJECT_ROOT))


def main() -> int:
    from zerocap.cli import run
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
