"""The acceptance suite: one PASS/FAIL line per criterion.

Run ``pytest tests/test_acceptance.py -s`` (or ``pathint check``) to see the lines.
"""

import pytest

from pathint.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA], ids=[f"c{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number):
    result = run_criterion(number)
    print(result.line())
    assert result.passed, result.line()
