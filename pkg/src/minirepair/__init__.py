"""Automatic program repair for MiniLang programs.

The package evolves variants of a buggy program until its whole test
suite passes: statements are ranked by suspiciousness from per-test
coverage, repair operators rewrite the AST at suspicious points, and
candidates that pass every test survive a two-phase validation.
"""

from minirepair.minilang import (
    CheckError,
    MiniLangError,
    ParseError,
    SourceUnit,
    StatementId,
    interpret,
    load_suite,
    parse,
    pretty_print,
)
from minirepair.faultloc import Navigator, build_matrix, ochiai, rank, tarantula, weimer_binary
from minirepair.engine import EngineConfig, NoFailingTest, RepairOutcome, UnlocalizableFault, evolve
from minirepair.validation import ValidationResult, validate

__version__ = "0.1.0"

__all__ = [
    "CheckError",
    "EngineConfig",
    "MiniLangError",
    "Navigator",
    "NoFailingTest",
    "ParseError",
    "RepairOutcome",
    "SourceUnit",
    "StatementId",
    "UnlocalizableFault",
    "ValidationResult",
    "build_matrix",
    "evolve",
    "interpret",
    "load_suite",
    "ochiai",
    "parse",
    "pretty_print",
    "rank",
    "tarantula",
    "validate",
    "weimer_binary",
]
