"""The acceptance suite: one test per criterion, at its stated tolerance.

Run with -s to see the pass/fail line and the measured values for each
criterion; `minorclass verify` prints the same results from the CLI.
"""

import pytest

from minorclass.acceptance import CRITERIA


@pytest.mark.parametrize("name", list(CRITERIA))
def test_criterion(name):
    result = CRITERIA[name]()
    verdict = "PASS" if result.passed else "FAIL"
    print(f"{verdict} {name}: {result.measured}")
    assert result.passed, f"{name} failed: {result.measured}"
