"""
The acceptance criteria, one test each, plus the parallel runner.
"""

import pytest

from zerocap.services.acceptance import CRITERIA, SuiteContext, run_criterion, run_suite


@pytest.mark.parametrize("number,name,check", CRITERIA, ids=[name for _, name, _ in CRITERIA])
def test_criterion(number, name, check):
    outcome = run_criterion(number, name, check, SuiteContext())
    assert outcome.error is None, outcome.error
    assert outcome.passed, outcome.residuals


def test_suite_runs_selected_criteria_in_parallel():
    outcomes = run_suite(SuiteContext(), jobs=2, only={1, 4}, progress=False)
    assert [o.number for o in outcomes] == [1, 4]
    assert all(o.passed for o in outcomes)
