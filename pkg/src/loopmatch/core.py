"""Runtime values, call-by-need thunks, lazy collections and environments."""

from __future__ import annotations

from typing import Any, Callable, Iterable, Iterator

from .errors import EvalError, UnboundVariable
from .syntax import quote_string

INT_MIN, INT_MAX = -(1 << 63), (1 << 63) - 1

_PENDING, _BUSY, _DONE = 0, 1, 2

# set by the evaluator module on import; breaks the core <-> evaluator cycle
_evaluate: Callable[[Any, "Env"], Any] | None = None


class Thunk:
    """A delayed value, evaluated at most once.

    The suspended computation is either ``(expr, env)`` for the evaluator or a
    zero-argument callable. Re-entering a thunk while it is being forced raises
    a divergence error instead of recursing forever.
    """

    __slots__ = ("_code", "_env", "_value", "_state")

    def __init__(self, code, env=None):
        self._code = code
        self._env = env
        self._value = None
        self._state = _PENDING

    @classmethod
    def of(cls, value) -> "Thunk":
        t = cls.__new__(cls)
        t._code = t._env = None
        t._value = value
        t._state = _DONE
        return t

    @property
    def forced(self) -> bool:
        return self._state == _DONE

    def force(self):
        if self._state == _DONE:
            return self._value
        if self._state == _BUSY:
            raise EvalError("divergent binding: value depends on itself")
        self._state = _BUSY
        try:
            if self._env is None and callable(self._code):
                value = self._code()
            else:
                value = _evaluate(self._code, self._env)
        except BaseException:
            self._state = _PENDING
            raise
        self._value = value
        self._state = _DONE
        self._code = self._env = None
        return value

    def __repr__(self) -> str:
        return f"Thunk({self._value!r})" if self.forced else "Thunk(<pending>)"


def force(t: Thunk):
    return t.force()


def check_int(n: int) -> int:
    if not INT_MIN <= n <= INT_MAX:
        raise EvalError("integer overflow")
    return n


# --- compound values -------------------------------------------------------

class _Buffer:
    """Shared memo of forced element thunks for one lazy sequence."""

    __slots__ = ("items", "source")

    def __init__(self, items: list, source: Iterator | None):
        self.items = items
        self.source = source

    def fill(self, n: int) -> bool:
        """Make at least ``n`` elements available; False if the sequence is shorter."""
        items = self.items
        while len(items) < n:
            if self.source is None:
                return False
            try:
                items.append(next(self.source))
            except StopIteration:
                self.source = None
                return False
            except ValueError as e:
                if "generator already executing" in str(e):
                    raise EvalError("divergent collection: an element depends on itself") from None
                raise
        return True


class Collection:
    """Immutable, possibly infinite sequence of element thunks.

    ``tail`` and ``prefix`` are O(1) views sharing the underlying buffer.
    """

    __slots__ = ("_buf", "_start", "_stop")

    def __init__(self, buf: _Buffer, start: int = 0, stop: int | None = None):
        self._buf = buf
        self._start = start
        self._stop = stop

    @classmethod
    def from_thunks(cls, thunks: Iterable[Thunk]) -> "Collection":
        return cls(_Buffer(list(thunks), None))

    @classmethod
    def from_values(cls, values: Iterable) -> "Collection":
        return cls(_Buffer([Thunk.of(v) for v in values], None))

    @classmethod
    def lazy(cls, source: Iterator[Thunk], prefix: Iterable[Thunk] = ()) -> "Collection":
        return cls(_Buffer(list(prefix), source))

    def nth(self, i: int) -> Thunk | None:
        j = self._start + i
        if self._stop is not None and j >= self._stop:
            return None
        buf = self._buf
        if j < len(buf.items) or buf.fill(j + 1):
            return buf.items[j]
        return None

    def has_at_least(self, n: int) -> bool:
        return n <= 0 or self.nth(n - 1) is not None

    def is_empty(self) -> bool:
        return self.nth(0) is None

    def head(self) -> Thunk:
        t = self.nth(0)
        if t is None:
            raise EvalError("car: empty collection")
        return t

    def tail(self) -> "Collection":
        if self.is_empty():
            raise EvalError("cdr: empty collection")
        return Collection(self._buf, self._start + 1, self._stop)

    def drop(self, k: int) -> "Collection":
        stop = self._stop
        start = self._start + k if stop is None else min(self._start + k, stop)
        return Collection(self._buf, start, stop)

    def prefix(self, k: int) -> "Collection":
        stop = self._start + k
        if self._stop is not None:
            stop = min(stop, self._stop)
        return Collection(self._buf, self._start, stop)

    def known_length(self) -> int | None:
        """Length if it is known without forcing anything more, else None."""
        buf = self._buf
        if buf.source is not None:
            if self._stop is not None and self._stop <= len(buf.items):
                return self._stop - self._start
            return None
        end = len(buf.items) if self._stop is None else min(self._stop, len(buf.items))
        return max(0, end - self._start)

    def __iter__(self) -> Iterator[Thunk]:
        i = 0
        while True:
            t = self.nth(i)
            if t is None:
                return
            yield t
            i += 1

    def values(self) -> Iterator:
        for t in self:
            yield t.force()

    def __len__(self) -> int:
        n = 0
        for _ in self:
            n += 1
        return n

    def __repr__(self) -> str:
        return f"Collection({show(self, limit=8)})"


class Tuple:
    __slots__ = ("items",)

    def __init__(self, items):
        self.items = tuple(items)

    def __repr__(self) -> str:
        return f"Tuple({show(self)})"


class Inductive:
    __slots__ = ("ctor", "args")

    def __init__(self, ctor: str, args):
        self.ctor = ctor
        self.args = tuple(args)

    def __repr__(self) -> str:
        return f"Inductive({show(self)})"


class Hash:
    """Integer-keyed map of thunks. Never mutated after construction."""

    __slots__ = ("entries",)

    def __init__(self, entries: dict[int, Thunk] | None = None):
        self.entries = dict(entries or {})

    def get(self, key: int) -> Thunk | None:
        return self.entries.get(key)

    def insert(self, key: int, value: Thunk) -> "Hash":
        new = dict(self.entries)
        new[key] = value
        return Hash(new)

    def __repr__(self) -> str:
        return f"Hash({show(self)})"


class Closure:
    __slots__ = ("params", "body", "env")

    def __init__(self, params, body, env):
        self.params = tuple(params)
        self.body = body
        self.env = env


class Builtin:
    """Host function. ``fn`` receives the argument thunks unforced."""

    __slots__ = ("name", "arity", "fn")

    def __init__(self, name: str, arity: int | None, fn: Callable[..., Any]):
        self.name = name
        self.arity = arity
        self.fn = fn


class SomethingMatcher:
    """The single host-level matcher: binds pattern variables to raw targets."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "something"


SOMETHING = SomethingMatcher()


class MatcherValue:
    """User matcher: ordered clauses closed over their defining environment."""

    __slots__ = ("clauses", "env", "_next_matchers", "clause_cache")

    def __init__(self, clauses, env: "Env"):
        self.clauses = tuple(clauses)
        self.env = env
        # next-matcher expressions see only ``env``, so each clause's result is fixed
        self._next_matchers: dict[int, tuple] = {}
        # pattern node id -> clause selection; filled by the engine
        self.clause_cache: dict[int, tuple] = {}

    def next_matchers(self, index: int, arity: int) -> tuple:
        cached = self._next_matchers.get(index)
        if cached is None:
            clause = self.clauses[index]
            value = _evaluate(clause.next_matchers, self.env)
            cached = unpack_tuple(value, arity, "next matchers")
            for m in cached:
                if not is_matcher(m.force()):
                    raise EvalError(f"next matcher of clause {index + 1} is not a matcher")
            self._next_matchers[index] = cached
        return cached


def is_matcher(v) -> bool:
    if isinstance(v, (MatcherValue, SomethingMatcher)):
        return True
    return isinstance(v, Tuple) and all(is_matcher(t.force()) for t in v.items)


def unpack_tuple(value, arity: int, what: str) -> tuple:
    """Split a value into ``arity`` thunks; a non-tuple stands for itself when arity is 1."""
    if isinstance(value, Tuple):
        if len(value.items) == arity:
            return value.items
        if arity != 1:
            raise EvalError(f"{what}: expected a tuple of {arity}, got {len(value.items)} elements")
    elif arity != 1:
        raise EvalError(f"{what}: expected a tuple of {arity}, got {type_name(value)}")
    return (Thunk.of(value),)


# --- environments ----------------------------------------------------------

class Env:
    """Chain of frames mapping names to thunks; the innermost binding wins."""

    __slots__ = ("vars", "parent")

    def __init__(self, vars: dict[str, Thunk], parent: "Env | None" = None):
        self.vars = vars
        self.parent = parent

    def lookup(self, name: str) -> Thunk:
        env = self
        while env is not None:
            t = env.vars.get(name)
            if t is not None:
                return t
            env = env.parent
        raise UnboundVariable(name)

    def extend(self, vars: dict[str, Thunk]) -> "Env":
        return Env(vars, self) if vars else self


def bind_indexed(frame: dict[str, Thunk], name: str, indices: list[int], value: Thunk) -> dict[str, Thunk]:
    """Return a copy of ``frame`` with ``name`` (optionally indexed) bound to ``value``.

    An indexed binding merges into an existing hash or starts a new one; with
    several indices the hashes nest, outermost index first.
    """
    new = dict(frame)
    if not indices:
        new[name] = value
        return new
    for i in indices:
        if type(i) is not int:
            raise EvalError("The expression after '_' must be evaluated to an integer")
    new[name] = Thunk.of(_hash_insert(frame.get(name), list(indices), value))
    return new


def _hash_insert(existing: Thunk | None, indices: list[int], value: Thunk) -> Hash:
    base = existing.force() if existing is not None and existing.forced else None
    if not isinstance(base, Hash):
        base = Hash()
    key, rest = indices[0], indices[1:]
    if not rest:
        return base.insert(key, value)
    return base.insert(key, Thunk.of(_hash_insert(base.get(key), rest, value)))


# --- equality and printing -------------------------------------------------

def type_name(v) -> str:
    if isinstance(v, bool):
        return "bool"
    return {int: "integer", str: "string", Collection: "collection", Tuple: "tuple",
            Inductive: "inductive data", Hash: "hash", Closure: "function",
            Builtin: "function", MatcherValue: "matcher",
            SomethingMatcher: "matcher"}.get(type(v), type(v).__name__)


def deep_equal(a, b) -> bool:
    """Structural equality; functions and matchers are not comparable."""
    for v in (a, b):
        if isinstance(v, (Closure, Builtin, MatcherValue, SomethingMatcher)):
            raise EvalError(f"cannot compare a {type_name(v)} for equality")
    if isinstance(a, bool) or isinstance(b, bool):
        return type(a) is type(b) and a == b
    if type(a) is not type(b):
        return False
    if isinstance(a, (int, str)):
        return a == b
    if isinstance(a, Collection):
        ia, ib = iter(a), iter(b)
        while True:
            x, y = next(ia, None), next(ib, None)
            if x is None or y is None:
                return x is None and y is None
            if not deep_equal(x.force(), y.force()):
                return False
    if isinstance(a, Tuple):
        return len(a.items) == len(b.items) and all(
            deep_equal(x.force(), y.force()) for x, y in zip(a.items, b.items))
    if isinstance(a, Inductive):
        return a.ctor == b.ctor and len(a.args) == len(b.args) and all(
            deep_equal(x.force(), y.force()) for x, y in zip(a.args, b.args))
    if isinstance(a, Hash):
        return a.entries.keys() == b.entries.keys() and all(
            deep_equal(a.entries[k].force(), b.entries[k].force()) for k in a.entries)
    raise EvalError(f"cannot compare {type_name(a)} values")


def show(v, limit: int | None = None) -> str:
    """Canonical text of a value. With ``limit``, collections print at most that many
    elements followed by ``...`` unless they are known to end there."""
    out: list[str] = []
    _show(v, limit, out)
    return "".join(out)


def _show(v, limit, out: list[str]) -> None:
    if isinstance(v, bool):
        out.append("#t" if v else "#f")
    elif isinstance(v, int):
        out.append(str(v))
    elif isinstance(v, str):
        out.append(quote_string(v))
    elif isinstance(v, Collection):
        out.append("{")
        n = 0
        for t in v:
            if limit is not None and n == limit:
                break
            if n:
                out.append(" ")
            _show(t.force(), limit, out)
            n += 1
        if limit is not None and n == limit and v.known_length() != n:
            out.append(" ..." if n else "...")
        out.append("}")
    elif isinstance(v, Tuple):
        out.append("[")
        for k, t in enumerate(v.items):
            if k:
                out.append(" ")
            _show(t.force(), limit, out)
        out.append("]")
    elif isinstance(v, Inductive):
        out.append("<" + v.ctor)
        for t in v.args:
            out.append(" ")
            _show(t.force(), limit, out)
        out.append(">")
    elif isinstance(v, Hash):
        out.append("{|")
        for k, key in enumerate(sorted(v.entries)):
            if k:
                out.append(" ")
            out.append(f"[{key} ")
            _show(v.entries[key].force(), limit, out)
            out.append("]")
        out.append("|}")
    elif isinstance(v, Closure):
        out.append("#<closure>")
    elif isinstance(v, Builtin):
        out.append(f"#<builtin {v.name}>")
    elif isinstance(v, (MatcherValue, SomethingMatcher)):
        out.append("#<matcher>")
    else:
        raise EvalError(f"cannot print {v!r}")
