"""Host functions installed in the base environment.

Every function receives its arguments as unforced thunks, so the lazy ones
(``cons``, ``append``, ``map`` ...) never touch more of their input than a
consumer asks for.
"""

from __future__ import annotations

import itertools

from .core import (
    Builtin, Closure, Collection, Inductive, Thunk, Tuple, check_int, deep_equal,
    type_name,
)
from .errors import EvalError


def _int(t: Thunk, fn: str) -> int:
    v = t.force()
    if type(v) is not int:
        raise EvalError(f"{fn}: expected an integer, got {type_name(v)}")
    return v


def _coll(t: Thunk, fn: str) -> Collection:
    v = t.force()
    if not isinstance(v, Collection):
        raise EvalError(f"{fn}: expected a collection, got {type_name(v)}")
    return v


def _bool(t: Thunk, fn: str) -> bool:
    v = t.force()
    if not isinstance(v, bool):
        raise EvalError(f"{fn}: expected a boolean, got {type_name(v)}")
    return v


def apply_function(f, args: list[Thunk]):
    from .evaluator import apply
    return apply(f, args)


# -- arithmetic and comparison ---------------------------------------------

def _add(*args):
    return check_int(sum(_int(a, "+") for a in args))


def _sub(first, *rest):
    x = _int(first, "-")
    if not rest:
        return check_int(-x)
    for a in rest:
        x -= _int(a, "-")
    return check_int(x)


def _mul(*args):
    x = 1
    for a in args:
        x = check_int(x * _int(a, "*"))
    return x


def _quotient(a, b):
    x, y = _int(a, "quotient"), _int(b, "quotient")
    if y == 0:
        raise EvalError("quotient: division by zero")
    q = abs(x) // abs(y)
    return check_int(q if (x >= 0) == (y >= 0) else -q)


def _modulo(a, b):
    x, y = _int(a, "modulo"), _int(b, "modulo")
    if y == 0:
        raise EvalError("modulo: division by zero")
    return x % y


def _compare(name, op):
    def fn(a, b):
        return op(_int(a, name), _int(b, name))
    return fn


# -- collections ------------------------------------------------------------

def _between(a, b):
    lo, hi = _int(a, "between"), _int(b, "between")
    return Collection.from_values(range(lo, hi + 1))


def _from(a):
    start = _int(a, "from")
    return Collection.lazy(Thunk.of(check_int(n)) for n in itertools.count(start))


def _cons(x, xs):
    def rest():
        yield from _coll(xs, "cons")
    return Collection.lazy(rest(), prefix=[x])


def _append(*colls):
    def gen():
        for c in colls:
            yield from _coll(c, "append")
    return Collection.lazy(gen())


def _concat(xss):
    def gen():
        for c in _coll(xss, "concat"):
            yield from _coll(c, "concat")
    return Collection.lazy(gen())


def _take(n, xs):
    k = _int(n, "take")
    return _coll(xs, "take").prefix(max(k, 0))


def _drop(n, xs):
    k = _int(n, "drop")
    return _coll(xs, "drop").drop(max(k, 0))


def _map(f, xs):
    fn = f.force()

    def gen():
        for t in _coll(xs, "map"):
            yield Thunk(lambda t=t: apply_function(fn, [t]))
    return Collection.lazy(gen())


def _filter(f, xs):
    fn = f.force()

    def gen():
        for t in _coll(xs, "filter"):
            keep = apply_function(fn, [t])
            if not isinstance(keep, bool):
                raise EvalError("filter: predicate must return a boolean")
            if keep:
                yield t
    return Collection.lazy(gen())


def _sum(xs):
    return check_int(sum(_int(t, "sum") for t in _coll(xs, "sum")))


def _length(xs):
    return len(_coll(xs, "length"))


def _nth(n, xs):
    k = _int(n, "nth")
    t = _coll(xs, "nth").nth(k - 1) if k >= 1 else None
    if t is None:
        raise EvalError(f"nth: index {k} out of range")
    return t.force()


def _splits(xs):
    """All ``[prefix suffix]`` splits, shortest prefix first; lazy for infinite input."""
    c = _coll(xs, "splits")

    def gen():
        k = 0
        while c.has_at_least(k):
            yield Thunk.of(Tuple((Thunk.of(c.prefix(k)), Thunk.of(c.drop(k)))))
            k += 1
    return Collection.lazy(gen())


def _deletions(xs):
    """``[x rest]`` for each element in order, ``rest`` being the others in order; lazy."""
    c = _coll(xs, "deletions")

    def gen():
        k = 0
        while c.has_at_least(k + 1):
            rest = Collection.lazy(itertools.chain(c.prefix(k), c.drop(k + 1)))
            yield Thunk.of(Tuple((c.nth(k), Thunk.of(rest))))
            k += 1
    return Collection.lazy(gen())


def _multiset_equal(a, b):
    xs = [t.force() for t in _coll(a, "multiset-equal?")]
    ys = [t.force() for t in _coll(b, "multiset-equal?")]
    if len(xs) != len(ys):
        return False
    for x in xs:
        for k, y in enumerate(ys):
            if deep_equal(x, y):
                del ys[k]
                break
        else:
            return False
    return True


def _primes():
    """Incremental sieve: each composite is stored under its next multiple."""
    yield Thunk.of(2)
    composites: dict[int, int] = {}
    n = 3
    while True:
        p = composites.pop(n, None)
        if p is None:
            yield Thunk.of(n)
            composites[n * n] = 2 * n
        else:
            m = n + p
            while m in composites:
                m += p
            composites[m] = p
        n += 2


def _car(xs):
    return _coll(xs, "car").head().force()


def _cdr(xs):
    return _coll(xs, "cdr").tail()


def _empty(xs):
    return _coll(xs, "empty?").is_empty()


def _not(x):
    return not _bool(x, "not")


def _and(*xs):
    return all(_bool(x, "and") for x in xs)


def _or(*xs):
    return any(_bool(x, "or") for x in xs)


def _eq(a, b):
    return deep_equal(a.force(), b.force())


def _ctor_name(x):
    v = x.force()
    if not isinstance(v, Inductive):
        raise EvalError(f"ctor-name: expected inductive data, got {type_name(v)}")
    return v.ctor


def _apply(f, args):
    return apply_function(f.force(), list(_coll(args, "apply")))


def _id(x):
    return x.force()


BUILTINS: list[Builtin] = [
    Builtin("+", None, _add),
    Builtin("-", None, _sub),
    Builtin("*", None, _mul),
    Builtin("quotient", 2, _quotient),
    Builtin("modulo", 2, _modulo),
    Builtin("lt?", 2, _compare("lt?", lambda a, b: a < b)),
    Builtin("lte?", 2, _compare("lte?", lambda a, b: a <= b)),
    Builtin("gt?", 2, _compare("gt?", lambda a, b: a > b)),
    Builtin("gte?", 2, _compare("gte?", lambda a, b: a >= b)),
    Builtin("eq?", 2, _eq),
    Builtin("not", 1, _not),
    Builtin("and", None, _and),
    Builtin("or", None, _or),
    Builtin("between", 2, _between),
    Builtin("from", 1, _from),
    Builtin("car", 1, _car),
    Builtin("cdr", 1, _cdr),
    Builtin("empty?", 1, _empty),
    Builtin("cons", 2, _cons),
    Builtin("append", None, _append),
    Builtin("concat", 1, _concat),
    Builtin("take", 2, _take),
    Builtin("drop", 2, _drop),
    Builtin("map", 2, _map),
    Builtin("filter", 2, _filter),
    Builtin("sum", 1, _sum),
    Builtin("length", 1, _length),
    Builtin("nth", 2, _nth),
    Builtin("splits", 1, _splits),
    Builtin("deletions", 1, _deletions),
    Builtin("multiset-equal?", 2, _multiset_equal),
    Builtin("ctor-name", 1, _ctor_name),
    Builtin("apply", 2, _apply),
    Builtin("id", 1, _id),
]

# the prelude rebinds take/drop/map with pattern-matching definitions
HOST_ALIASES = {"host-take": "take", "host-drop": "drop", "host-map": "map"}


def base_bindings() -> dict[str, Thunk]:
    env = {b.name: Thunk.of(b) for b in BUILTINS}
    for alias, name in HOST_ALIASES.items():
        env[alias] = env[name]
    env["primes"] = Thunk(lambda: Collection.lazy(_primes()))
    return env


def is_function(v) -> bool:
    return isinstance(v, (Closure, Builtin))
