# services/acceptance/__init__.py
from .suite import CRITERIA, SWEEP_BETA_SQ, CheckOutcome, SuiteContext, Tally, run_criterion, run_suite

__all__ = ["CRITERIA", "SWEEP_BETA_SQ", "CheckOutcome", "SuiteContext", "Tally", "run_criterion", "run_suite"]
