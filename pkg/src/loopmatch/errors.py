"""Exception hierarchy shared by the reader, evaluator and matching engine."""

from __future__ import annotations


class LoopMatchError(Exception):
    """Base class for every error raised by the interpreter."""


class ParseError(LoopMatchError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


class EvalError(LoopMatchError):
    """Runtime error raised while evaluating an expression."""


class UnboundVariable(EvalError):
    def __init__(self, name: str, detail: str = ""):
        self.name = name
        super().__init__(detail or f"unbound variable: {name}")


class MatchError(EvalError):
    """Runtime error raised by the pattern-matching machine."""
