"""Two-phase validation of candidate repairs.

Phase 1 re-runs only the originally failing tests; any failure discards
the candidate immediately and phase 2 never executes. Phase 2 is the
regression check: every previously passing test must still pass. Which
tests count as "originally failing" is fixed once, from the unpatched
program, and never re-classified during a run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from minirepair.minilang import SourceUnit
from minirepair.minilang.testsuite import TestCase, run_test


class UnknownTestName(Exception):
    """An originally-failing test name is not present in the suite."""


@dataclass(frozen=True)
class ValidationResult:
    phase1: tuple[tuple[str, bool], ...]  # (test name, passed) for originally failing tests
    phase2: tuple[tuple[str, bool], ...]  # regression verdicts; empty when phase 1 failed
    valid: bool


def validate(
    candidate: SourceUnit,
    suite: list[TestCase],
    originally_failing: Iterable[str],
    step_budget: int,
) -> ValidationResult:
    failing_names = set(originally_failing)
    if not failing_names:
        raise ValueError("originally_failing must be nonempty")
    known = {test.name for test in suite}
    unknown = failing_names - known
    if unknown:
        raise UnknownTestName(f"unknown test name(s): {', '.join(sorted(unknown))}")

    phase1 = tuple(
        (test.name, run_test(candidate, test, step_budget)[0])
        for test in suite
        if test.name in failing_names
    )
    if not all(passed for _, passed in phase1):
        return ValidationResult(phase1, (), False)

    phase2 = tuple(
        (test.name, run_test(candidate, test, step_budget)[0])
        for test in suite
        if test.name not in failing_names
    )
    return ValidationResult(phase1, phase2, all(passed for _, passed in phase2))
