"""The thirteen acceptance criteria at their stated tolerances.

Each criterion prints one ``[PASS]``/``[FAIL]`` line; the lines are also
collected into the terminal summary.  Run standalone with
``python3 tests/test_acceptance.py``.
"""
import sys

import pytest

from ising_exact.acceptance import CRITERIA, run_criterion

LINES: list[str] = []


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number):
    result = run_criterion(number)
    LINES.append(result.line())
    print(result.line())
    assert result.passed, result.measured


def test_every_criterion_registered():
    assert sorted(CRITERIA) == list(range(1, 14))


if __name__ == "__main__":
    failures = 0
    for n in sorted(CRITERIA):
        r = run_criterion(n)
        print(r.line(), flush=True)
        failures += not r.passed
    sys.exit(1 if failures else 0)
