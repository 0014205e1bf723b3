"""Abstract syntax for expressions, patterns and matcher clauses.

All nodes are frozen dataclasses so that two parses of the same text compare
equal. ``unparse`` renders any node back to canonical surface syntax; parsing
that text again yields an equal tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Union


# --- expressions -----------------------------------------------------------

@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class StrLit:
    value: str


@dataclass(frozen=True)
class Var:
    name: str
    indices: tuple = ()


@dataclass(frozen=True)
class DataExpr:
    ctor: str
    args: tuple = ()


@dataclass(frozen=True)
class TupleExpr:
    items: tuple = ()


@dataclass(frozen=True)
class CollectionExpr:
    items: tuple = ()


@dataclass(frozen=True)
class HashExpr:
    pairs: tuple = ()  # of (int, Expr)


@dataclass(frozen=True)
class Lambda:
    params: tuple
    body: Any


@dataclass(frozen=True)
class App:
    fn: Any
    args: tuple = ()


@dataclass(frozen=True)
class If:
    cond: Any
    then: Any
    orelse: Any


@dataclass(frozen=True)
class Let:
    bindings: tuple  # of (name, Expr)
    body: Any


@dataclass(frozen=True)
class LetRec:
    bindings: tuple
    body: Any


@dataclass(frozen=True)
class MatchAll:
    target: Any
    matcher: Any
    pattern: Any
    body: Any


@dataclass(frozen=True)
class Match:
    target: Any
    matcher: Any
    clauses: tuple  # of (Pattern, Expr)


@dataclass(frozen=True)
class MatcherExpr:
    clauses: tuple  # of MatcherClause


@dataclass(frozen=True)
class AlgebraicDataMatcher:
    ctors: tuple  # of (name, tuple of Expr)


@dataclass(frozen=True)
class SomethingExpr:
    pass


@dataclass(frozen=True, eq=False)
class Const:
    """A host value spliced into generated code; never produced by the reader."""
    value: Any
    label: str = "const"


@dataclass(frozen=True)
class Define:
    name: str
    expr: Any


# --- patterns --------------------------------------------------------------

@dataclass(frozen=True)
class Wildcard:
    pass


@dataclass(frozen=True)
class PatVar:
    name: str
    indices: tuple = ()


@dataclass(frozen=True)
class ValuePat:
    expr: Any


@dataclass(frozen=True)
class InductivePat:
    ctor: str
    args: tuple = ()


@dataclass(frozen=True)
class OrPat:
    alts: tuple


@dataclass(frozen=True)
class AndPat:
    parts: tuple


@dataclass(frozen=True)
class NotPat:
    pattern: Any


@dataclass(frozen=True)
class TuplePat:
    items: tuple


@dataclass(frozen=True)
class LetPat:
    bindings: tuple  # of (PatVar, Expr)
    body: Any


@dataclass(frozen=True)
class IndexRange:
    start: Any
    ends: Any
    end_pattern: Any


@dataclass(frozen=True)
class LoopPat:
    var: str
    range: IndexRange
    repeat: Any
    end: Any


@dataclass(frozen=True)
class EllipsisPat:
    pass


# --- matcher clauses -------------------------------------------------------

@dataclass(frozen=True)
class PPHole:
    pass


@dataclass(frozen=True)
class PPValueHole:
    name: str


@dataclass(frozen=True)
class PPInductive:
    ctor: str
    args: tuple = ()


@dataclass(frozen=True)
class DPVar:
    name: str


@dataclass(frozen=True)
class DPWildcard:
    pass


@dataclass(frozen=True)
class DPInductive:
    ctor: str
    args: tuple = ()


@dataclass(frozen=True)
class MatcherClause:
    pp: Any
    next_matchers: Any
    data_clauses: tuple = field(default=())  # of (dp, Expr)


Expr = Union[IntLit, BoolLit, StrLit, Var, DataExpr, TupleExpr, CollectionExpr,
             HashExpr, Lambda, App, If, Let, LetRec, MatchAll, Match, MatcherExpr,
             AlgebraicDataMatcher, SomethingExpr, Const]
Pattern = Union[Wildcard, PatVar, ValuePat, InductivePat, OrPat, AndPat, NotPat,
                TuplePat, LetPat, LoopPat, EllipsisPat]


# --- canonical printing ----------------------------------------------------

def quote_string(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    return f'"{out}"'


def _seq(nodes) -> str:
    return " ".join(unparse(n) for n in nodes)


def _wrap(open_: str, inner: str, close: str) -> str:
    return f"{open_}{inner}{close}"


def _index(e) -> str:
    if isinstance(e, (IntLit, App)) or (isinstance(e, Var) and not e.indices):
        return unparse(e)
    raise TypeError(f"no index form for {e!r}")


def _indexed(prefix: str, name: str, indices) -> str:
    return prefix + name + "".join("_" + _index(i) for i in indices)


def unparse(node) -> str:
    """Render an AST node as canonical surface syntax."""
    match node:
        case IntLit(v):
            return str(v)
        case BoolLit(v):
            return "#t" if v else "#f"
        case StrLit(v):
            return quote_string(v)
        case Var(name, indices):
            return _indexed("", name, indices)
        case DataExpr(ctor, args) | InductivePat(ctor, args) | PPInductive(ctor, args) | DPInductive(ctor, args):
            return _wrap("<", " ".join([ctor] + [unparse(a) for a in args]), ">")
        case TupleExpr(items) | TuplePat(items):
            return _wrap("[", _seq(items), "]")
        case CollectionExpr(items):
            return _wrap("{", _seq(items), "}")
        case HashExpr(pairs):
            return _wrap("{|", " ".join(f"[{k} {unparse(v)}]" for k, v in pairs), "|}")
        case Lambda(params, body):
            ps = " ".join("$" + p for p in params)
            return f"(lambda [{ps}] {unparse(body)})"
        case App(fn, args):
            return _wrap("(", " ".join([unparse(fn)] + [unparse(a) for a in args]), ")")
        case If(c, t, e):
            return f"(if {unparse(c)} {unparse(t)} {unparse(e)})"
        case Let(bindings, body) | LetRec(bindings, body):
            kw = "let" if isinstance(node, Let) else "letrec"
            bs = " ".join(f"[${n} {unparse(e)}]" for n, e in bindings)
            return f"({kw} {{{bs}}} {unparse(body)})"
        case MatchAll(t, m, p, b):
            return f"(match-all {unparse(t)} {unparse(m)} [{unparse(p)} {unparse(b)}])"
        case Match(t, m, clauses):
            cs = " ".join(f"[{unparse(p)} {unparse(b)}]" for p, b in clauses)
            return f"(match {unparse(t)} {unparse(m)} {{{cs}}})"
        case MatcherExpr(clauses):
            return f"(matcher {{{' '.join(unparse(c) for c in clauses)}}})"
        case MatcherClause(pp, nm, dcs):
            ds = " ".join(f"[{unparse(dp)} {unparse(e)}]" for dp, e in dcs)
            return f"[{unparse(pp)} {unparse(nm)} {{{ds}}}]"
        case AlgebraicDataMatcher(ctors):
            cs = " ".join(_wrap("<", " ".join([n] + [unparse(a) for a in args]), ">") for n, args in ctors)
            return f"(algebraic-data-matcher {{{cs}}})"
        case SomethingExpr():
            return "something"
        case Const(_, label):
            return f"#<{label}>"
        case Define(name, e):
            return f"(define ${name} {unparse(e)})"
        case Wildcard() | DPWildcard():
            return "_"
        case PatVar(name, indices):
            return _indexed("$", name, indices)
        case ValuePat(e):
            return "," + unparse(e)
        case OrPat(alts):
            return _wrap("(| ", _seq(alts), ")") if alts else "(|)"
        case AndPat(parts):
            return _wrap("(& ", _seq(parts), ")") if parts else "(&)"
        case NotPat(p):
            return "!" + unparse(p)
        case LetPat(bindings, body):
            bs = " ".join(f"[{unparse(v)} {unparse(e)}]" for v, e in bindings)
            return f"(let {{{bs}}} {unparse(body)})"
        case LoopPat(var, rng, rep, end):
            r = f"[{unparse(rng.start)} {unparse(rng.ends)} {unparse(rng.end_pattern)}]"
            return f"(loop ${var} {r} {unparse(rep)} {unparse(end)})"
        case EllipsisPat():
            return "..."
        case PPHole():
            return "$"
        case PPValueHole(name):
            return ",$" + name
        case DPVar(name):
            return "$" + name
    raise TypeError(f"cannot unparse {node!r}")
