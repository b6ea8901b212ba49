"""Source positions and the error hierarchy shared by every pipeline stage."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """Half-open region of a source file, 1-based lines and columns."""

    file: str
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"

    def to(self, other: Span) -> Span:
        """Span covering self through other (same file)."""
        return Span(self.file, self.line, self.col, other.end_line, other.end_col)

    def as_json(self) -> dict:
        return {
            "file": self.file,
            "line": self.line,
            "col": self.col,
            "endLine": self.end_line,
            "endCol": self.end_col,
        }


class FluenceError(Exception):
    """Base for all user-facing errors; carries an optional source span."""

    exit_code = 1

    def __init__(self, message: str, span: Span | None = None):
        self.message = message
        self.span = span
        super().__init__(f"{span}: {message}" if span else message)


class LexError(FluenceError):
    exit_code = 2


class ParseError(FluenceError):
    exit_code = 2


class DesugarError(FluenceError):
    exit_code = 3


class EvalError(FluenceError):
    exit_code = 4


class ViewError(FluenceError):
    exit_code = 4


class ConfigError(FluenceError):
    exit_code = 5
