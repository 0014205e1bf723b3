"""Property-based checks of engine, core and reader invariants."""

import pytest
from hypothesis import given, settings, strategies as st

from loopmatch import Interpreter, show
from loopmatch.core import Thunk, bind_indexed
from loopmatch.engine import initial_state, msearch, step_state
from loopmatch.errors import MatchError, ParseError
from loopmatch.reader import parse_expr, parse_pattern
from loopmatch.syntax import EllipsisPat, unparse

INTERP = Interpreter()
small_lists = st.lists(st.integers(-5, 5), max_size=6)


def coll(xs):
    return "{" + " ".join(map(str, xs)) + "}"


def start(pattern, matcher, target):
    return initial_state(parse_pattern(pattern), INTERP.eval(matcher),
                         Thunk.of(INTERP.eval(target)), INTERP.env)


def walk(s, limit=20000):
    """Every (state, successor) edge reachable from ``s``, depth first."""
    pending = [s]
    while pending and limit:
        limit -= 1
        s = pending.pop()
        _, spawned = step_state(s)
        for t in spawned or ():
            yield s, t
            pending.append(t)


def is_lifo_step(before, after):
    if after is before:
        return True
    if after is not None and after[1] is before:
        return True  # push
    if before is None:
        return False
    if after is before[1]:
        return True  # pop
    return after is not None and after[1] is before[1] and after[0].var == before[0].var


# --- loop contexts -----------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(rows=st.integers(0, 3), cols=st.integers(0, 3), extra=st.integers(0, 2))
def test_loop_stack_is_lifo(rows, cols, extra):
    data = coll(range(rows * cols + extra))
    s = start(f"(loop $i [1 {{0 {rows}}} _] (loop $j [1 {cols}] <cons $x_i_j ...> ...) _)",
              "(list integer)", data)
    for before, after in walk(s):
        assert is_lifo_step(before.loops, after.loops)


@settings(max_examples=40, deadline=None)
@given(rows=st.integers(1, 3), cols=st.integers(1, 3))
def test_nested_loop_indices(rows, cols):
    data = coll(range(1, rows * cols + 1))
    out = INTERP.eval(f"""(match-all {data} (list integer)
        [(loop $i [1 {rows}] (loop $j [1 {cols}] <cons $x_i_j ...> ...) <nil>)
         (map (lambda [$i] (map (lambda [$j] x_i_j) (between 1 {cols}))) (between 1 {rows}))])""")
    expected = [[(i - 1) * cols + j for j in range(1, cols + 1)] for i in range(1, rows + 1)]
    assert show(out) == "{" + coll(coll(r) for r in expected) + "}"


# --- not-patterns ------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(xs=small_lists, k=st.integers(-5, 5))
def test_not_pattern_binds_nothing(xs, k):
    s = start(f"<join _ <cons (& !(& ,{k} $inner) $x) _>>", "(list integer)", coll(xs))
    deltas = list(msearch(s))
    assert len(deltas) == sum(1 for x in xs if x != k)
    assert all(set(d) == {"x"} for d in deltas)


# --- ellipsis ----------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(xs=small_lists)
def test_zero_repetition(xs):
    out = INTERP.eval(f"(match-all {coll(xs)} (list integer) [(loop $i [1 0] <cons $x_i ...> $r) r])")
    assert show(out) == "{" + coll(xs) + "}"


@settings(max_examples=30, deadline=None)
@given(xs=small_lists, n=st.integers(0, 6))
def test_loop_drops_exactly_n(xs, n):
    out = INTERP.eval(f"(match-all {coll(xs)} (list integer) [(loop $i [1 {n}] <cons _ ...> $r) r])")
    assert show(out) == ("{" + coll(xs[n:]) + "}" if n <= len(xs) else "{}")


@pytest.mark.parametrize("pattern", ["...", "<cons ... _>", "(& $x ...)", "[... _]",
                                     "(loop $i [1 2] <cons _ ...> <cons ... _>)"])
def test_ellipsis_outside_loop_rejected(pattern):
    with pytest.raises(ParseError, match=r"'\.\.\.' outside of a loop"):
        parse_expr(f"(match-all {{1}} (list integer) [{pattern} 1])")


@settings(max_examples=20, deadline=None)
@given(xs=small_lists)
def test_ellipsis_outside_loop_at_run_time(xs):
    s = initial_state(EllipsisPat(), INTERP.eval("(list integer)"), Thunk.of(INTERP.eval(coll(xs))),
                      INTERP.env)
    with pytest.raises(MatchError, match="outside of a loop"):
        list(msearch(s))


# --- something ---------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(v=st.integers(-100, 100), w=st.integers(-100, 100))
def test_value_pattern_under_something(v, w):
    with pytest.raises(MatchError, match="something can handle only"):
        list(msearch(start(f",{w}", "something", str(v))))


# --- bind-indexed ------------------------------------------------------------

keys = st.lists(st.integers(-3, 3), max_size=3)


@settings(max_examples=100, deadline=None)
@given(steps=st.lists(st.tuples(st.sampled_from("xyz"), keys, st.integers()), max_size=8),
       name=st.sampled_from("xyz"), idx=keys, val=st.integers())
def test_bind_indexed_is_functional(steps, name, idx, val):
    frame = {}
    for n, ks, v in steps:
        frame = bind_indexed(frame, n, ks, Thunk.of(v))
    snapshot = {k: show(t.force()) for k, t in frame.items()}
    new = bind_indexed(frame, name, idx, Thunk.of(val))
    assert {k: show(t.force()) for k, t in frame.items()} == snapshot
    got = new[name].force()
    for k in idx:
        got = got.get(k).force()
    assert got == val
    for other in frame:
        if other != name:
            assert new[other] is frame[other]


# --- show / parse ------------------------------------------------------------

atoms = st.one_of(st.integers(-10**6, 10**6), st.booleans(),
                  st.text(st.characters(min_codepoint=32, max_codepoint=126), max_size=5))


def source(v):
    if isinstance(v, bool):
        return "#t" if v else "#f"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    kind, items = v
    if kind == "coll":
        return "{" + " ".join(map(source, items)) + "}"
    if kind == "tuple":
        return "[" + " ".join(map(source, items)) + "]"
    return "{|" + " ".join(f"[{k} {source(x)}]" for k, x in items) + "|}"


values = st.recursive(atoms, lambda inner: st.one_of(
    st.tuples(st.just("coll"), st.lists(inner, max_size=4)),
    st.tuples(st.just("tuple"), st.lists(inner, min_size=2, max_size=3)),
    st.tuples(st.just("hash"), st.dictionaries(st.integers(-5, 5), inner, max_size=3)
              .map(lambda d: sorted(d.items())))), max_leaves=12)


@settings(max_examples=150, deadline=None)
@given(v=values)
def test_show_parse_fixpoint(v):
    once = show(INTERP.eval(source(v)))
    assert show(INTERP.eval(once)) == once


@settings(max_examples=150, deadline=None)
@given(v=values)
def test_unparse_parse_fixpoint(v):
    e = parse_expr(source(v))
    assert parse_expr(unparse(e)) == e
