import pytest

import minirepair.validation as validation_module
from minirepair.engine import fitness
from minirepair.minilang import parse
from minirepair.validation import UnknownTestName, validate


def test_valid_repair(correct_max, max_suite):
    result = validate(correct_max, max_suite, {"t1"}, 1000)
    assert result.phase1 == (("t1", True),)
    assert result.phase2 == (("t2", True),)
    assert result.valid


def test_degenerate_candidate_fails_regression(max_suite):
    hardcoded = parse("fn max(a: int, b: int) -> int { return 5; }")
    result = validate(hardcoded, max_suite, {"t1"}, 1000)
    assert result.phase1 == (("t1", True),)
    assert result.phase2 == (("t2", False),)
    assert not result.valid


def test_unrepaired_candidate_skips_phase2(buggy_max, max_suite):
    result = validate(buggy_max, max_suite, {"t1"}, 1000)
    assert result.phase1 == (("t1", False),)
    assert result.phase2 == ()
    assert not result.valid


def test_no_regression_test_runs_after_phase1_failure(buggy_max, max_suite, monkeypatch):
    executed = []
    real_run_test = validation_module.run_test

    def counting_run_test(unit, test, budget):
        executed.append(test.name)
        return real_run_test(unit, test, budget)

    monkeypatch.setattr(validation_module, "run_test", counting_run_test)
    validate(buggy_max, max_suite, {"t1"}, 1000)
    assert executed == ["t1"]  # t2 (previously passing) never executed


def test_unknown_test_name(buggy_max, max_suite):
    with pytest.raises(UnknownTestName):
        validate(buggy_max, max_suite, {"nope"}, 1000)


def test_empty_failing_set_rejected(buggy_max, max_suite):
    with pytest.raises(ValueError):
        validate(buggy_max, max_suite, set(), 1000)


def test_validity_matches_zero_fitness(buggy_max, correct_max, max_suite):
    hardcoded = parse("fn max(a: int, b: int) -> int { return 5; }")
    for candidate in (buggy_max, correct_max, hardcoded):
        result = validate(candidate, max_suite, {"t1"}, 1000)
        assert result.valid == (fitness(candidate, max_suite, 1000) == 0)
