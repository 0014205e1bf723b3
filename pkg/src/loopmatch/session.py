"""An interpreter session: one environment, plus helpers for running source text."""

from __future__ import annotations

import gc
import sys
from dataclasses import dataclass, field
from typing import TextIO

from . import engine
from .core import Env, show
from .errors import LoopMatchError, ParseError
from .evaluator import base_env, run_form
from .prelude import load_prelude
from .reader import parse_expr, parse_located, parse_program
from .syntax import Define

# Searches allocate many short-lived objects; the default generation-0 threshold
# makes the collector rescan a large live heap far too often.
GC_THRESHOLD = (50_000, 20, 100)


def tune_gc() -> None:
    if gc.get_threshold()[0] < GC_THRESHOLD[0]:
        gc.set_threshold(*GC_THRESHOLD)


@dataclass
class Interpreter:
    """A persistent environment, with or without the standard prelude."""

    prelude: bool = True
    env: Env = field(init=False, repr=False)

    def __post_init__(self):
        tune_gc()
        self.env = base_env()
        if self.prelude:
            load_prelude(self.env)

    def run(self, text: str) -> list:
        """Run every form in ``text``; returns the values of the non-define forms."""
        out = []
        for form in parse_program(text):
            v = run_form(form, self.env)
            if not isinstance(form, Define):
                out.append(v)
        return out

    def eval(self, text: str):
        """Evaluate a single expression."""
        return run_form(parse_expr(text), self.env)

    def show(self, text: str, take: int | None = None) -> str:
        return show(self.eval(text), take)

    def execute(self, text: str, out: TextIO = sys.stdout, err: TextIO = sys.stderr,
                take: int | None = None, trace: bool = False, dump_ast: bool = False,
                source: str = "<input>") -> bool:
        """Run ``text`` form by form, printing each value; returns False if any form failed.

        A parse error stops before anything runs; an evaluation error is reported
        and the remaining forms still run.
        """
        try:
            forms = parse_located(text)
        except ParseError as e:
            err.write(f"{source}:{e.line}:{e.col}: parse error: {e.message}\n")
            return False
        ok = True
        for form, line, col in forms:
            if dump_ast:
                err.write(f"{form!r}\n")
            try:
                if trace:
                    with engine.tracing(_trace_printer(err)):
                        text_out = self._run_and_show(form, take)
                else:
                    text_out = self._run_and_show(form, take)
            except (LoopMatchError, RecursionError) as e:
                msg = "recursion too deep" if isinstance(e, RecursionError) else str(e)
                err.write(f"{source}:{line}:{col}: error: {msg}\n")
                ok = False
                continue
            if text_out is not None:
                out.write(text_out + "\n")
                out.flush()
        return ok

    def _run_and_show(self, form, take):
        v = run_form(form, self.env)
        return None if isinstance(form, Define) else show(v, take)


def _trace_printer(err: TextIO):
    def hook(sweep: int, vectors: int, emitted: int) -> None:
        err.write(f"[trace] sweep {sweep}: vectors={vectors} emitted={emitted}\n")
    return hook
