"""The pattern-matching machine.

A search works on *matching states*: a stack of matching atoms
``(pattern, matcher, target)``, the evaluation environment, the bindings
accumulated so far and a stack of loop contexts. Stepping a state yields a
lazy vector of successor states. The scheduler keeps a frontier of such
vectors and, on every sweep, steps only the head of each one, so infinite
branches cannot starve finite ones.
"""

from __future__ import annotations

import contextlib
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Callable, Iterator

from . import evaluator
from .core import (
    SOMETHING, Collection, Env, MatcherValue, Thunk, Tuple, bind_indexed,
    deep_equal, type_name, unpack_tuple,
)
from .errors import EvalError, MatchError
from .syntax import (
    AndPat, DPInductive, DPVar, DPWildcard, EllipsisPat, InductivePat, LetPat, LoopPat,
    NotPat, OrPat, PatVar, PPHole, PPInductive, PPValueHole, TuplePat, ValuePat,
    Wildcard, unparse,
)

ELLIPSIS = EllipsisPat()


class State:
    """Matching state. ``atoms`` and ``loops`` are cons lists: ``None`` or ``(head, rest)``."""

    __slots__ = ("atoms", "gamma", "delta", "loops")

    def __init__(self, atoms, gamma: Env, delta: dict, loops):
        self.atoms = atoms
        self.gamma = gamma
        self.delta = delta
        self.loops = loops

    def pattern_env(self) -> Env:
        """Environment for expressions inside patterns: bindings, then loop indices."""
        env = Env(self.delta, self.gamma) if self.delta else self.gamma
        contexts = []
        node = self.loops
        while node is not None:
            contexts.append(node[0])
            node = node[1]
        for ctx in reversed(contexts):
            env = Env({ctx.var: Thunk.of(ctx.index)}, env)
        return env

    def atom_list(self) -> list:
        out, node = [], self.atoms
        while node is not None:
            out.append(node[0])
            node = node[1]
        return out

    def loop_list(self) -> list:
        out, node = [], self.loops
        while node is not None:
            out.append(node[0])
            node = node[1]
        return out


class LoopContext:
    __slots__ = ("var", "index", "ends", "end_pattern", "repeat", "end")

    def __init__(self, var, index, ends, end_pattern, repeat, end):
        self.var = var
        self.index = index
        self.ends = ends  # Thunk until the first ellipsis forces it, then a Collection
        self.end_pattern = end_pattern
        self.repeat = repeat
        self.end = end

    def advanced(self, ends) -> "LoopContext":
        return LoopContext(self.var, self.index + 1, ends, self.end_pattern, self.repeat, self.end)

    def __repr__(self) -> str:
        return f"LoopContext({self.var}={self.index})"


def initial_state(pattern, matcher, target: Thunk, env: Env, delta=None, loops=None) -> State:
    return State(((pattern, matcher, target), None), env, delta or {}, loops)


def push(atoms, new: list):
    for a in reversed(new):
        atoms = (a, atoms)
    return atoms


# --- statistics and tracing -------------------------------------------------

@dataclass
class SearchStats:
    states: int = 0
    sweeps: int = 0


_stats: ContextVar[SearchStats | None] = ContextVar("loopmatch_stats", default=None)
_trace: ContextVar[Callable[[int, int, int], None] | None] = ContextVar("loopmatch_trace", default=None)


@contextlib.contextmanager
def collect_stats():
    """Count every state stepped (nested searches included) inside the block."""
    stats = SearchStats()
    token = _stats.set(stats)
    try:
        yield stats
    finally:
        _stats.reset(token)


@contextlib.contextmanager
def tracing(hook: Callable[[int, int, int], None]):
    """Call ``hook(sweep_index, vector_count, emitted_count)`` after each sweep."""
    token = _trace.set(hook)
    try:
        yield
    finally:
        _trace.reset(token)


# --- scheduler --------------------------------------------------------------

INTERLEAVED = "interleaved"
CONCATENATED = "concatenated"
_order: ContextVar[str] = ContextVar("loopmatch_order", default=INTERLEAVED)


@contextlib.contextmanager
def frontier_order(order: str):
    """Select how a sweep assembles the next frontier (see ``sweep``)."""
    if order not in (INTERLEAVED, CONCATENATED):
        raise ValueError(f"unknown frontier order {order!r}")
    token = _order.set(order)
    try:
        yield
    finally:
        _order.reset(token)


Vector = tuple[State, Iterator[State]]  # a state-vector: its head and the rest


def vector(states) -> Vector | None:
    """Make a state-vector from an iterable of states; ``None`` when there are none."""
    it = iter(states)
    head = next(it, None)
    return None if head is None else (head, it)


def sweep(frontier: list[Vector], order: str | None = None) -> tuple[list[dict], list[Vector]]:
    """Step the head state of every vector once.

    Returns the result frames in frontier order and the next frontier. With
    the default interleaved order each vector contributes its spawned vector
    followed by its own tail; the concatenated order puts every spawned
    vector before every tail. Empty vectors are dropped.
    """
    order = order or _order.get()
    emitted: list[dict] = []
    spawned: list[Vector] = []
    tails: list[Vector] = []
    interleave = order == INTERLEAVED
    stats = _stats.get()
    for head, rest in frontier:
        if stats is not None:
            stats.states += 1
        result, sub = step_state(head)
        if result is not None:
            emitted.append(result)
        if sub is not None:
            first = next(sub, None)
            if first is not None:
                spawned.append((first, sub))
        following = next(rest, None)
        if following is not None:
            (spawned if interleave else tails).append((following, rest))
    spawned.extend(tails)
    return emitted, spawned


def msearch(state: State) -> Iterator[dict]:
    """Lazily yield the binding frame of every successful match reachable from ``state``."""
    frontier: list[Vector] = [(state, iter(()))]
    hook = _trace.get()
    stats = _stats.get()
    order = _order.get()
    n = 0
    while frontier:
        count = len(frontier)
        emitted, frontier = sweep(frontier, order)
        if stats is not None:
            stats.sweeps += 1
        if hook is not None:
            hook(n, count, len(emitted))
        n += 1
        yield from emitted


# --- stepping a single state ------------------------------------------------

def _one(s: State) -> Iterator[State]:
    return iter((s,))


def step_state(s: State) -> tuple[dict | None, Iterator[State] | None]:
    """Step one state: ``(result, spawned)``; a terminal state yields its bindings."""
    if s.atoms is None:
        return s.delta, None
    (p, m, v), rest = s.atoms
    t = type(p)
    if t is Wildcard:
        return None, _one(State(rest, s.gamma, s.delta, s.loops))
    if t is EllipsisPat:
        return None, _expand_ellipsis(s, m, v, rest)
    if t is LoopPat:
        return None, _expand_loop(s, p, m, v, rest)
    if t is AndPat:
        atoms = push(rest, [(q, m, v) for q in p.parts])
        return None, _one(State(atoms, s.gamma, s.delta, s.loops))
    if t is OrPat:
        return None, (State(((q, m, v), rest), s.gamma, s.delta, s.loops) for q in p.alts)
    if t is NotPat:
        inner = State(((p.pattern, m, v), None), s.gamma, s.delta, s.loops)
        if next(msearch(inner), None) is not None:
            return None, None
        return None, _one(State(rest, s.gamma, s.delta, s.loops))
    if t is LetPat:
        delta = s.delta
        for var, expr in p.bindings:
            penv = State(None, s.gamma, delta, s.loops).pattern_env()
            indices = [evaluator.index_value(ix, penv) for ix in var.indices]
            delta = bind_indexed(delta, var.name, indices, evaluator.delay(expr, penv))
        return None, _one(State(((p.body, m, v), rest), s.gamma, delta, s.loops))
    if m is SOMETHING:
        if t is PatVar:
            return None, _one(_bind(s, p, v, rest))
        raise MatchError("something can handle only wildcards and pattern variables, "
                         f"not {unparse(p)}")
    if type(m) is Tuple:
        return None, _tuple_matcher(s, p, m, v, rest)
    if type(m) is MatcherValue:
        return None, resolve_matcher_clause(s, p, m, v, rest)
    raise MatchError(f"not a matcher: {type_name(m)}")


def _bind(s: State, p: PatVar, v: Thunk, rest) -> State:
    indices = []
    if p.indices:
        penv = s.pattern_env()
        indices = [evaluator.index_value(ix, penv) for ix in p.indices]
    return State(rest, s.gamma, bind_indexed(s.delta, p.name, indices, v), s.loops)


def _tuple_matcher(s: State, p, m: Tuple, v: Thunk, rest):
    t = type(p)
    if t is PatVar:
        return _one(_bind(s, p, v, rest))
    if t is ValuePat:
        expected = evaluator.evaluate(p.expr, s.pattern_env())
        return _one(State(rest, s.gamma, s.delta, s.loops)) if deep_equal(expected, v.force()) else None
    if t is TuplePat:
        target = v.force()
        if not isinstance(target, Tuple):
            raise MatchError(f"tuple pattern against a {type_name(target)}")
        if not (len(p.items) == len(m.items) == len(target.items)):
            raise MatchError(f"tuple arity mismatch: pattern {len(p.items)}, "
                             f"matcher {len(m.items)}, target {len(target.items)}")
        atoms = push(rest, [(q, mt.force(), vt)
                            for q, mt, vt in zip(p.items, m.items, target.items)])
        return _one(State(atoms, s.gamma, s.delta, s.loops))
    raise MatchError(f"a tuple matcher cannot handle {unparse(p)}")


def _expand_loop(s: State, p: LoopPat, m, v: Thunk, rest):
    penv = s.pattern_env()
    start = evaluator.evaluate(p.range.start, penv)
    if type(start) is not int:
        raise MatchError(f"loop ${p.var}: start number must be an integer, got {type_name(start)}")
    ends = Thunk(p.range.ends, penv)
    ctx = LoopContext(p.var, start - 1, ends, p.range.end_pattern, p.repeat, p.end)
    return _one(State(((ELLIPSIS, m, v), rest), s.gamma, s.delta, (ctx, s.loops)))


def _end_numbers(ctx: LoopContext) -> Collection:
    ends = ctx.ends
    if isinstance(ends, Thunk):
        ends = ends.force()
        if not isinstance(ends, Collection):
            raise MatchError(f"loop ${ctx.var}: end numbers must be a collection, "
                             f"got {type_name(ends)}")
        ctx.ends = ends  # memoizing the forced thunk; the context is otherwise unchanged
    return ends


def _expand_ellipsis(s: State, m, v: Thunk, rest):
    if s.loops is None:
        raise MatchError("'...' outside of a loop pattern")
    ctx, outer = s.loops
    ends = _end_numbers(ctx)
    first = ends.nth(0)
    if first is None:
        return None
    e1 = first.force()
    if type(e1) is not int:
        raise MatchError(f"loop ${ctx.var}: end numbers must be integers, got {type_name(e1)}")
    k = ctx.index
    if k < e1:
        return _one(State(((ctx.repeat, m, v), rest), s.gamma, s.delta, (ctx.advanced(ends), outer)))
    if k > e1:
        return None

    def branches():
        end_atoms = ((ctx.end_pattern, SOMETHING, Thunk.of(k)), ((ctx.end, m, v), rest))
        yield State(end_atoms, s.gamma, s.delta, outer)
        later = ends.tail()
        if not later.is_empty():
            yield State(((ctx.repeat, m, v), rest), s.gamma, s.delta, (ctx.advanced(later), outer))
    return branches()


# --- user matchers ----------------------------------------------------------

def _pp_shape(pp, p, subs: list, holes: list) -> bool:
    """Structural part of pattern-pattern matching; value holes are collected unevaluated."""
    t = type(pp)
    if t is PPHole:
        subs.append(p)
        return True
    if t is PPValueHole:
        if type(p) is not ValuePat:
            return False
        holes.append((pp.name, p.expr))
        return True
    if t is PPInductive:
        if type(p) is not InductivePat or p.ctor != pp.ctor or len(p.args) != len(pp.args):
            return False
        return all(_pp_shape(ppi, pi, subs, holes) for ppi, pi in zip(pp.args, p.args))
    raise MatchError(f"bad pattern-pattern {pp!r}")


def ppm(pp, p, penv: Callable[[], Env]):
    """Match a pattern-pattern against a pattern: ``None`` or ``(subpatterns, bindings)``."""
    subs: list = []
    holes: list = []
    if not _pp_shape(pp, p, subs, holes):
        return None
    return subs, {name: Thunk(expr, penv()) for name, expr in holes}


def select_clause(m: MatcherValue, p):
    """First clause whose pattern-pattern accepts ``p``: ``(index, subpatterns, holes)``.

    Only the shape of ``p`` matters here, so the answer is cached per pattern node.
    """
    key = id(p)
    entry = m.clause_cache.get(key)
    if entry is not None and entry[0] is p:
        return entry[1]
    found = None
    for ci, clause in enumerate(m.clauses):
        subs: list = []
        holes: list = []
        if _pp_shape(clause.pp, p, subs, holes):
            found = (ci, tuple(subs), tuple(holes))
            break
    m.clause_cache[key] = (p, found)
    return found


def pdm(dp, v: Thunk):
    """Match a data pattern against a target: ``None`` or bindings."""
    t = type(dp)
    if t is DPVar:
        return {dp.name: v}
    if t is DPWildcard:
        return {}
    if t is DPInductive:
        from .core import Inductive
        x = v.force()
        if not isinstance(x, Inductive) or x.ctor != dp.ctor or len(x.args) != len(dp.args):
            return None
        binds = {}
        for dpi, a in zip(dp.args, x.args):
            r = pdm(dpi, a)
            if r is None:
                return None
            binds.update(r)
        return binds
    raise MatchError(f"bad data pattern {dp!r}")


def resolve_matcher_clause(s: State, p, m: MatcherValue, v: Thunk, rest):
    """Commit to the first clause whose pattern-pattern and data pattern match.

    Returns a lazy vector with one successor per tuple of next targets.
    """
    found = select_clause(m, p)
    if found is None:
        raise MatchError(f"no matcher clause for pattern {unparse(p)}")
    ci, subpats, holes = found
    clause = m.clauses[ci]
    for dp, next_expr in clause.data_clauses:
        frame = pdm(dp, v)
        if frame is None:
            continue
        if holes:
            penv = s.pattern_env()
            frame = {**{name: Thunk(expr, penv) for name, expr in holes}, **frame}
        matchers = [t.force() for t in m.next_matchers(ci, len(subpats))]
        targets = evaluator.evaluate(next_expr, Env(frame, m.env) if frame else m.env)
        if not isinstance(targets, Collection):
            raise MatchError(f"next targets must be a collection, got {type_name(targets)}")
        return _successors(s, subpats, matchers, targets, rest)
    raise MatchError(f"no data clause matched the target for pattern {unparse(p)}")


def _successors(s: State, subpats, matchers, targets: Collection, rest):
    k = len(subpats)
    gamma, delta, loops = s.gamma, s.delta, s.loops
    for tup in targets:
        try:
            vs = unpack_tuple(tup.force(), k, "next targets")
        except EvalError as e:
            raise MatchError(str(e)) from None
        atoms = rest
        for j in range(k - 1, -1, -1):
            atoms = ((subpats[j], matchers[j], vs[j]), atoms)
        yield State(atoms, gamma, delta, loops)
