"""The evolutionary repair loop.

The search starts from a population of clones of the buggy program.
Each generation, every parent receives one transformation at a point
chosen by navigating the suspiciousness ranking (computed once, on the
original program, and re-resolved per variant by structural path), the
children's fitness (failing-test count) is measured, and the best of
parents plus children survive. The run stops when enough validated
patches have been collected or the generation budget is spent. Given the
same inputs and seed, a run is fully deterministic.
"""

from __future__ import annotations

import difflib
import json
import random
import time
from dataclasses import dataclass, field

from minirepair.faultloc import Navigator, build_matrix, rank
from minirepair.minilang import SourceUnit, pretty_print
from minirepair.minilang.nodes import path_of
from minirepair.minilang.testsuite import TestCase, run_test
from minirepair.operators import (
    EMPTY_POOL,
    ModificationPoint,
    PatchOp,
    PatchSkip,
    apply_patch_op,
    enumerate_ops,
    harvest_ingredients,
)
from minirepair.validation import validate

REDRAW_ATTEMPTS = 10  # per parent per generation

STATUS_PATCH_FOUND = "patch_found"
STATUS_EXHAUSTED = "exhausted"


class NoFailingTest(Exception):
    """The whole suite passes on the input program: nothing to repair."""


class UnlocalizableFault(Exception):
    """No statement received a positive suspiciousness score."""


@dataclass
class EngineConfig:
    mode: str
    population_size: int = 10
    max_generations: int = 50
    formula: str = "ochiai"
    navigation: str = "weighted"
    ingredient_scope: str = "local"
    step_budget: int = 100_000
    seed: int = 0
    max_patches: int = 1
    fast_validation: bool = False
    check_lineages: bool = False  # debug: replay every survivor each generation

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")
        if self.step_budget < 1:
            raise ValueError("step_budget must be >= 1")

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "population_size": self.population_size,
            "max_generations": self.max_generations,
            "formula": self.formula,
            "navigation": self.navigation,
            "ingredient_scope": self.ingredient_scope,
            "step_budget": self.step_budget,
            "seed": self.seed,
            "max_patches": self.max_patches,
            "fast_validation": self.fast_validation,
            "check_lineages": self.check_lineages,
        }


@dataclass
class ProgramVariant:
    ast: SourceUnit
    lineage: list[PatchOp]
    fitness: int
    generation_born: int


@dataclass
class FoundPatch:
    diff: str
    lineage: list[PatchOp]
    generation: int


@dataclass
class RepairOutcome:
    status: str
    patches: list[FoundPatch]
    generations_run: int
    variants_evaluated: int
    per_generation_best_fitness: list[int]
    wall_time_seconds: float
    seed: int
    config: EngineConfig

    def report_dict(self) -> dict:
        return {
            "status": self.status,
            "seed": self.seed,
            "config": self.config.as_dict(),
            "generations_run": self.generations_run,
            "variants_evaluated": self.variants_evaluated,
            "patches": [
                {
                    "diff": patch.diff,
                    "lineage": [op.trace_entry() for op in patch.lineage],
                    "generation": patch.generation,
                }
                for patch in self.patches
            ],
            "per_generation_best_fitness": self.per_generation_best_fitness,
            "wall_time_seconds": self.wall_time_seconds,
        }

    def report_json(self) -> str:
        return json.dumps(self.report_dict(), indent=2, sort_keys=True) + "\n"


def fitness(
    unit: SourceUnit,
    suite: list[TestCase],
    step_budget: int,
    failing_first: list[str] | None = None,
    fast: bool = False,
) -> int:
    """Number of failing tests (runtime errors and budget blowups fail).

    Tests run originally-failing-first when `failing_first` is given;
    with `fast`, evaluation stops at the first failure, making the
    result a lower bound (exact whenever it is zero).
    """
    ordered = suite
    if failing_first is not None:
        first = set(failing_first)
        ordered = [t for t in suite if t.name in first] + [t for t in suite if t.name not in first]
    failures = 0
    for test in ordered:
        passed, _ = run_test(unit, test, step_budget)
        if not passed:
            failures += 1
            if fast:
                break
    return failures


def init_population(original: SourceUnit, n: int, original_fitness: int) -> list[ProgramVariant]:
    """n clones of the input program, all with its fitness and empty lineage."""
    if n < 1:
        raise ValueError("population size must be >= 1")
    return [ProgramVariant(original, [], original_fitness, 0) for _ in range(n)]


def select(
    parents: list[ProgramVariant],
    children: list[ProgramVariant],
    n: int,
    original: ProgramVariant | None = None,
    generation: int = 0,
) -> list[ProgramVariant]:
    """Elitist survival: the n lowest-fitness variants of parents + children.

    Ties prefer younger variants, then shorter lineages, then input
    order. When the pool is smaller than n, fresh clones of the original
    pad the population.
    """
    if not parents:
        raise ValueError("parents must be nonempty")
    pool = parents + children
    pool.sort(key=lambda v: (v.fitness, -v.generation_born, len(v.lineage)))
    survivors = pool[:n]
    while len(survivors) < n and original is not None:
        survivors.append(ProgramVariant(original.ast, [], original.fitness, generation))
    return survivors


@dataclass
class _SearchState:
    """Everything one generation step needs, fixed at run start."""

    suite: list[TestCase]
    originally_failing: list[str]
    config: EngineConfig
    rng: random.Random
    navigator: Navigator
    point_paths: dict  # StatementId -> structural path in the original program
    variants_evaluated: int = 0
    patches: list[FoundPatch] = field(default_factory=list)
    _seen_diffs: set = field(default_factory=set)
    original_text: str = ""


def step_generation(
    population: list[ProgramVariant], state: _SearchState, generation: int
) -> list[ProgramVariant]:
    """Produce at most one child per parent; validate any fitness-zero child."""
    config = state.config
    children: list[ProgramVariant] = []
    for parent in population:
        child = _spawn_child(parent, state, generation)
        if child is None:
            continue
        children.append(child)
        if child.fitness == 0 and len(state.patches) < config.max_patches:
            result = validate(
                child.ast, state.suite, set(state.originally_failing), config.step_budget
            )
            if result.valid:
                diff = make_diff(
                    state.original_text, pretty_print(child.ast), child.ast.source_name
                )
                if diff not in state._seen_diffs:
                    state._seen_diffs.add(diff)
                    state.patches.append(FoundPatch(diff, list(child.lineage), generation))
    return children


def _spawn_child(
    parent: ProgramVariant, state: _SearchState, generation: int
) -> ProgramVariant | None:
    config = state.config
    for _ in range(REDRAW_ATTEMPTS):
        suspicious = state.navigator.pick()
        path = state.point_paths[suspicious.statement]
        point = ModificationPoint(suspicious.statement, path, suspicious.score)
        try:
            pool = EMPTY_POOL
            if config.mode == "jgenprog":
                pool = harvest_ingredients(parent.ast, point, config.ingredient_scope)
            ops = enumerate_ops(config.mode, point, parent.ast, pool)
        except PatchSkip:
            continue
        if not ops:
            continue
        op = ops[state.rng.randrange(len(ops))]
        try:
            child_ast, concrete = apply_patch_op(parent.ast, op, state.rng)
        except PatchSkip:
            continue
        concrete.generation = generation
        child_fitness = fitness(
            child_ast,
            state.suite,
            config.step_budget,
            failing_first=state.originally_failing,
            fast=config.fast_validation,
        )
        state.variants_evaluated += 1
        return ProgramVariant(child_ast, parent.lineage + [concrete], child_fitness, generation)
    return None


def evolve(original: SourceUnit, suite: list[TestCase], config: EngineConfig) -> RepairOutcome:
    """Run the full search; deterministic given `config.seed`.

    Raises NoFailingTest when the suite already passes and
    UnlocalizableFault when no statement is suspicious.
    """
    started = time.perf_counter()
    matrix = build_matrix(original, suite, config.step_budget)
    if matrix.total_fail == 0:
        raise NoFailingTest("all tests pass on the input program")
    ranked = rank(matrix, config.formula)
    if not ranked:
        raise UnlocalizableFault("no statement has a positive suspiciousness score")

    rng = random.Random(config.seed)
    state = _SearchState(
        suite=suite,
        originally_failing=matrix.failing_test_names,
        config=config,
        rng=rng,
        navigator=Navigator(ranked, config.navigation, rng),
        point_paths={s.statement: path_of(original, s.statement) for s in ranked},
        original_text=pretty_print(original),
    )
    state.variants_evaluated = 1  # the original program, measured by the matrix

    prototype = ProgramVariant(original, [], matrix.total_fail, 0)
    population = init_population(original, config.population_size, matrix.total_fail)
    best_per_generation: list[int] = []
    generations_run = 0
    for generation in range(1, config.max_generations + 1):
        children = step_generation(population, state, generation)
        population = select(
            population, children, config.population_size, prototype, generation
        )
        best_per_generation.append(min(v.fitness for v in population))
        generations_run = generation
        if config.check_lineages:
            for survivor in population:
                replayed = replay_lineage(original, survivor.lineage)
                if pretty_print(replayed) != pretty_print(survivor.ast):
                    raise AssertionError(
                        f"lineage replay diverged for a generation-{generation} survivor"
                    )
        if len(state.patches) >= config.max_patches:
            break

    return RepairOutcome(
        status=STATUS_PATCH_FOUND if state.patches else STATUS_EXHAUSTED,
        patches=state.patches,
        generations_run=generations_run,
        variants_evaluated=state.variants_evaluated,
        per_generation_best_fitness=best_per_generation,
        wall_time_seconds=time.perf_counter() - started,
        seed=config.seed,
        config=config,
    )


def replay_lineage(original: SourceUnit, lineage: list[PatchOp]) -> SourceUnit:
    """Re-apply a concrete lineage to the original program."""
    unit = original
    for op in lineage:
        unit, _ = apply_patch_op(unit, op)
    return unit


def make_diff(original_text: str, repaired_text: str, name: str = "program") -> str:
    """Unified diff between canonical prints; applies cleanly with patch(1)."""
    label = name if name.endswith(".ml") else f"{name}.ml"
    lines = difflib.unified_diff(
        original_text.splitlines(keepends=True),
        repaired_text.splitlines(keepends=True),
        fromfile=f"a/{label}",
        tofile=f"b/{label}",
    )
    return "".join(lines)
