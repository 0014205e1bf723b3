"""Call-by-need expression evaluator and the match-all / match entry points."""

from __future__ import annotations

import sys

from . import core
from .builtins import BUILTINS, base_bindings
from .core import (
    SOMETHING, Builtin, Closure, Collection, Env, Hash, Inductive, MatcherValue,
    Thunk, Tuple, is_matcher, type_name,
)
from . import engine
from .errors import EvalError, UnboundVariable
from .syntax import (
    AlgebraicDataMatcher, App, BoolLit, CollectionExpr, Const, DataExpr, Define,
    DPInductive, DPVar, DPWildcard, HashExpr, If, IntLit, Lambda, Let, LetRec, Match,
    MatchAll, MatcherClause, MatcherExpr, PPHole, PPInductive, PPValueHole,
    SomethingExpr, StrLit, TupleExpr, Var,
)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


def evaluate(e, env: Env):
    """Evaluate ``e`` in ``env`` to a value (weak head normal form)."""
    return _DISPATCH[type(e)](e, env)


core._evaluate = evaluate


def delay(e, env: Env) -> Thunk:
    """Suspend ``e``; plain variables share the existing thunk (call-by-need)."""
    t = type(e)
    if t is Var and not e.indices:
        return env.lookup(e.name)
    if t is IntLit or t is StrLit or t is BoolLit:
        return Thunk.of(e.value)
    return Thunk(e, env)


def index_value(e, env: Env) -> int:
    v = evaluate(e, env)
    if type(v) is not int:
        raise EvalError("The expression after '_' must be evaluated to an integer")
    return v


def _var(e: Var, env: Env):
    v = env.lookup(e.name).force()
    if not e.indices:
        return v
    shown = e.name
    for ix in e.indices:
        key = index_value(ix, env)
        shown += f"_{key}"
        if not isinstance(v, Hash):
            raise EvalError(f"{shown}: {e.name} is a {type_name(v)}, not a hash")
        t = v.get(key)
        if t is None:
            raise UnboundVariable(e.name, f"unbound variable: {shown} (no entry for key {key})")
        v = t.force()
    return v


def apply(f, args: list[Thunk]):
    if isinstance(f, Closure):
        if len(args) != len(f.params):
            raise EvalError(f"arity mismatch: function expects {len(f.params)} "
                            f"argument(s), got {len(args)}")
        return evaluate(f.body, Env(dict(zip(f.params, args)), f.env))
    if isinstance(f, Builtin):
        if f.arity is not None and len(args) != f.arity:
            raise EvalError(f"arity mismatch: {f.name} expects {f.arity} "
                            f"argument(s), got {len(args)}")
        return f.fn(*args)
    raise EvalError(f"cannot apply a {type_name(f)}")


def _app(e: App, env: Env):
    f = evaluate(e.fn, env)
    return apply(f, [delay(a, env) for a in e.args])


def _if(e: If, env: Env):
    c = evaluate(e.cond, env)
    if not isinstance(c, bool):
        raise EvalError(f"if: condition must be a boolean, got {type_name(c)}")
    return evaluate(e.then if c else e.orelse, env)


def _let(e: Let, env: Env):
    for name, expr in e.bindings:
        env = Env({name: delay(expr, env)}, env)
    return evaluate(e.body, env)


def _letrec(e: LetRec, env: Env):
    frame: dict[str, Thunk] = {}
    new = Env(frame, env)
    for name, expr in e.bindings:
        frame[name] = Thunk(expr, new)
    return evaluate(e.body, new)


def _hash(e: HashExpr, env: Env):
    return Hash({k: delay(v, env) for k, v in e.pairs})


def matcher_value(e, env: Env):
    m = evaluate(e, env)
    if not is_matcher(m):
        raise EvalError(f"expected a matcher, got {type_name(m)}")
    return m


def eval_match_all(e: MatchAll, env: Env) -> Collection:
    """Lazy collection of the body evaluated under every match result, in search order."""
    target = delay(e.target, env)
    m = matcher_value(e.matcher, env)
    results = engine.msearch(engine.initial_state(e.pattern, m, target, env))
    body = e.body

    def gen():
        for delta in results:
            yield Thunk(body, Env(delta, env))
    return Collection.lazy(gen())


def eval_match(e: Match, env: Env):
    target = delay(e.target, env)
    m = matcher_value(e.matcher, env)
    for pattern, body in e.clauses:
        first = next(engine.msearch(engine.initial_state(pattern, m, target, env)), None)
        if first is not None:
            return evaluate(body, Env(first, env))
    raise EvalError("no matching clause")


def eval_matcher(e: MatcherExpr, env: Env) -> MatcherValue:
    for c in e.clauses:
        if not isinstance(c, MatcherClause) or not c.data_clauses:
            raise EvalError("malformed matcher clause: needs at least one data clause")
    return MatcherValue(e.clauses, env)


def eval_algebraic_data_matcher(e: AlgebraicDataMatcher, env: Env) -> MatcherValue:
    """Build a matcher with one clause per constructor, then value and catch-all clauses."""
    seen = set()
    clauses = []
    for name, arg_matchers in e.ctors:
        if name in seen:
            raise EvalError(f"algebraic-data-matcher: duplicate constructor '{name}'")
        seen.add(name)
        names = [f"x{k + 1}" for k in range(len(arg_matchers))]
        data_ctor = name[0].upper() + name[1:]
        clauses.append(MatcherClause(
            PPInductive(name, tuple(PPHole() for _ in arg_matchers)),
            TupleExpr(tuple(arg_matchers)),
            ((DPInductive(data_ctor, tuple(DPVar(n) for n in names)),
              CollectionExpr((TupleExpr(tuple(Var(n) for n in names)),))),
             (DPWildcard(), CollectionExpr(())))))
    eq = Const(EQ, "eq?")
    clauses.append(MatcherClause(
        PPValueHole("val"), TupleExpr(()),
        ((DPVar("tgt"), If(App(eq, (Var("val"), Var("tgt"))),
                           CollectionExpr((TupleExpr(()),)), CollectionExpr(()))),)))
    clauses.append(MatcherClause(
        PPHole(), TupleExpr((SomethingExpr(),)),
        ((DPVar("tgt"), CollectionExpr((TupleExpr((Var("tgt"),)),))),)))
    return MatcherValue(clauses, env)


_DISPATCH = {
    IntLit: lambda e, env: e.value,
    BoolLit: lambda e, env: e.value,
    StrLit: lambda e, env: e.value,
    Var: _var,
    DataExpr: lambda e, env: Inductive(e.ctor, [delay(a, env) for a in e.args]),
    TupleExpr: lambda e, env: Tuple([delay(a, env) for a in e.items]),
    CollectionExpr: lambda e, env: Collection.from_thunks([delay(a, env) for a in e.items]),
    HashExpr: _hash,
    Lambda: lambda e, env: Closure(e.params, e.body, env),
    App: _app,
    If: _if,
    Let: _let,
    LetRec: _letrec,
    MatchAll: eval_match_all,
    Match: eval_match,
    MatcherExpr: eval_matcher,
    AlgebraicDataMatcher: eval_algebraic_data_matcher,
    SomethingExpr: lambda e, env: SOMETHING,
    Const: lambda e, env: e.value,
}

EQ = next(b for b in BUILTINS if b.name == "eq?")


def base_env() -> Env:
    """Fresh environment: host builtins below an empty, mutable global frame."""
    return Env({}, Env(base_bindings()))


def eval_define(name: str, expr, env: Env) -> Env:
    """Bind ``name`` in the top frame of ``env``.

    The top frame is the one mutable frame, so definitions can refer to each
    other regardless of order; a later definition shadows an earlier one.
    """
    env.vars[name] = Thunk(expr, env)
    return env


def run_form(form, env: Env):
    """Evaluate one top-level form; returns the value, or None for a define."""
    if isinstance(form, Define):
        eval_define(form.name, form.expr, env)
        return None
    return evaluate(form, env)
