"""Acceptance gate: every numbered criterion must pass at its tolerance.

Run with -s to see the one-line verdicts as they are produced; the same
lines are emitted by `isobif acceptance`.
"""

import pytest

from isobif.acceptance import CRITERIA
from isobif.config import DEFAULT_CONFIG


@pytest.mark.parametrize(
    "index,name,check",
    [(i, name, fn) for i, (name, fn) in enumerate(CRITERIA, start=1)],
    ids=[f"{i:02d}_{name.replace(' ', '_')}" for i, (name, _) in enumerate(CRITERIA, start=1)],
)
def test_criterion(index, name, check):
    ok, detail = check(DEFAULT_CONFIG)
    print(f"criterion {index:2d} {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {index} ({name}) failed: {detail}"


def test_suite_is_complete():
    assert len(CRITERIA) == 10
