"""An interpreter for a small S-expression language with extensible,
non-linear, backtracking pattern matching and loop patterns."""

from .core import show
from .errors import EvalError, LoopMatchError, MatchError, ParseError, UnboundVariable
from .reader import parse_expr, parse_pattern, parse_program
from .session import Interpreter

__all__ = [
    "Interpreter", "show", "parse_program", "parse_expr", "parse_pattern",
    "LoopMatchError", "ParseError", "EvalError", "UnboundVariable", "MatchError",
]
__version__ = "0.1.0"
