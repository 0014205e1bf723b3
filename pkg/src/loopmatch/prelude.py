"""Loading the standard prelude into an environment."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .core import Env
from .errors import LoopMatchError
from .evaluator import base_env, run_form
from .reader import parse_program
from .syntax import Define

PRELUDE_FILE = "prelude.egi"


@lru_cache(maxsize=1)
def prelude_source() -> str:
    return resources.files(__package__).joinpath(PRELUDE_FILE).read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def prelude_forms() -> tuple:
    return tuple(parse_program(prelude_source()))


def exported_names() -> list[str]:
    return [f.name for f in prelude_forms() if isinstance(f, Define)]


def load_prelude(env: Env) -> Env:
    """Run every prelude definition in ``env``, forcing each so that errors surface now."""
    for form in prelude_forms():
        run_form(form, env)
    for name in exported_names():
        try:
            env.lookup(name).force()
        except LoopMatchError as e:
            raise LoopMatchError(f"prelude: definition of '{name}' failed: {e}") from e
    return env


def prelude_env() -> Env:
    return load_prelude(base_env())
