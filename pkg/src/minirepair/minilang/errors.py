"""Error types shared by the MiniLang front end."""

from __future__ import annotations


class MiniLangError(Exception):
    """Base class for all MiniLang front-end errors; carries a source location."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"{self.line}:{self.col}: {self.message}"


class ParseError(MiniLangError):
    """Lexical or syntactic error."""


class CheckError(MiniLangError):
    """Semantic error: typing, duplicate names, or a missing return path."""


class SuiteError(Exception):
    """A test-suite file is malformed or inconsistent with the program."""
