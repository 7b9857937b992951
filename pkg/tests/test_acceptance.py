"""Acceptance gate: every criterion must pass at its stated tolerance.

Each criterion prints one pass/fail line (run pytest with -s or check the
captured output on failure).
"""

import pytest

from lnlab.acceptance import CRITERIA, RUNTIME_LIMITS, run_acceptance

RESULTS = {}


@pytest.fixture(scope="module", autouse=True)
def _run_suite():
    for result in run_acceptance(seed=0):
        RESULTS[result.name] = result
        print(result.line())


@pytest.mark.parametrize("name", list(CRITERIA))
def test_criterion(name):
    result = RESULTS[name]
    print(result.line())
    assert result.passed, result.line()
    assert result.seconds <= RUNTIME_LIMITS[name], (
        f"{name} took {result.seconds:.2f}s, budget {RUNTIME_LIMITS[name]}s")
