"""Tokenizer and recursive-descent parser for the surface language."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
from .syntax import (
    AlgebraicDataMatcher, AndPat, App, BoolLit, CollectionExpr, DataExpr, Define,
    DPInductive, DPVar, DPWildcard, EllipsisPat, HashExpr, If, IndexRange, IntLit,
    InductivePat, Lambda, Let, LetPat, LetRec, LoopPat, Match, MatchAll,
    MatcherClause, MatcherExpr, NotPat, OrPat, PatVar, PPHole, PPInductive,
    PPValueHole, SomethingExpr, StrLit, TupleExpr, TuplePat, ValuePat, Var,
    Wildcard,
)

# token kinds
OPEN_PAREN, CLOSE_PAREN = "(", ")"
OPEN_ANGLE, CLOSE_ANGLE = "<", ">"
OPEN_BRACKET, CLOSE_BRACKET = "[", "]"
OPEN_BRACE, CLOSE_BRACE = "{", "}"
OPEN_HASH, CLOSE_HASH = "{|", "|}"
INT, STRING, BOOL, SYMBOL = "int", "string", "bool", "symbol"
PATVAR = "patvar"      # $name
HOLE = "hole"          # bare $ (pattern-pattern hole)
VALUE = ","
NOT = "!"
INDEX = "index"        # _ glued to the preceding token
WILDCARD = "_"
ELLIPSIS = "..."
AT = "@"

OPENERS = {OPEN_PAREN: CLOSE_PAREN, OPEN_ANGLE: CLOSE_ANGLE, OPEN_BRACKET: CLOSE_BRACKET,
           OPEN_BRACE: CLOSE_BRACE, OPEN_HASH: CLOSE_HASH}
CLOSERS = set(OPENERS.values())

_SYMBOL_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ+-*/=%?")
_SYMBOL_CHARS = _SYMBOL_START | set("0123456789")
_DELIMS = set(" \t\r\n()[]{}<>;\",")


@dataclass(frozen=True)
class Token:
    kind: str
    value: object
    line: int
    col: int
    glued: bool = False  # no whitespace between this token and the previous one


def tokenize(text: str, check_brackets: bool = True) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(text)
    line, col = 1, 1
    glued = False

    def advance(k: int) -> None:
        nonlocal i, line, col
        for ch in text[i:i + k]:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        i += k

    def emit(kind, value, length):
        nonlocal glued
        tokens.append(Token(kind, value, line, col, glued))
        advance(length)
        glued = True

    while i < n:
        c = text[i]
        if c in " \t\r\n":
            advance(1)
            glued = False
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                advance(1)
            glued = False
            continue
        nxt = text[i + 1] if i + 1 < n else ""
        if c == "{" and nxt == "|":
            emit(OPEN_HASH, None, 2)
        elif c == "|" and nxt == "}":
            emit(CLOSE_HASH, None, 2)
        elif c in "()[]{}>":
            emit(c, None, 1)
        elif c == "<":
            if not nxt.isalpha():
                raise ParseError("'<' must be followed by a constructor name", line, col)
            emit(OPEN_ANGLE, None, 1)
        elif c == '"':
            start_line, start_col = line, col
            j, buf = i + 1, []
            while True:
                if j >= n:
                    raise ParseError("unterminated string literal", start_line, start_col)
                ch = text[j]
                if ch == '"':
                    break
                if ch == "\\":
                    if j + 1 >= n:
                        raise ParseError("unterminated string literal", start_line, start_col)
                    esc = text[j + 1]
                    buf.append({"n": "\n", "t": "\t"}.get(esc, esc))
                    j += 2
                else:
                    buf.append(ch)
                    j += 1
            emit(STRING, "".join(buf), j + 1 - i)
        elif c == "#":
            if nxt in "tf" and (i + 2 >= n or text[i + 2] in _DELIMS or text[i + 2] in "|"):
                emit(BOOL, nxt == "t", 2)
            else:
                raise ParseError(f"unknown literal '#{nxt}'", line, col)
        elif c == "$":
            j = i + 1
            if j < n and text[j] in _SYMBOL_START:
                while j < n and text[j] in _SYMBOL_CHARS:
                    j += 1
                emit(PATVAR, text[i + 1:j], j - i)
            else:
                emit(HOLE, None, 1)
        elif c == ",":
            emit(VALUE, None, 1)
        elif c == "!":
            emit(NOT, None, 1)
        elif c == "@":
            emit(AT, None, 1)
        elif c == "_":
            prev = tokens[-1] if tokens else None
            if glued and prev is not None and prev.kind in (SYMBOL, PATVAR, INT, CLOSE_PAREN):
                emit(INDEX, None, 1)
            else:
                emit(WILDCARD, None, 1)
        elif c == "." and text.startswith("...", i):
            emit(ELLIPSIS, None, 3)
        elif c.isdigit() or (c == "-" and nxt.isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] in _SYMBOL_CHARS and not text[j].isdigit():
                raise ParseError(f"malformed number '{text[i:j + 1]}'", line, col)
            emit(INT, int(text[i:j]), j - i)
        elif c in _SYMBOL_START or c in "&|":
            j = i + 1
            if c not in "&|":
                while j < n and text[j] in _SYMBOL_CHARS:
                    j += 1
            emit(SYMBOL, text[i:j], j - i)
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    if check_brackets:
        _check_brackets(tokens)
    return tokens


def _check_brackets(tokens: list[Token]) -> None:
    stack: list[Token] = []
    for t in tokens:
        if t.kind in OPENERS:
            stack.append(t)
        elif t.kind in CLOSERS:
            if not stack:
                raise ParseError(f"unexpected '{t.kind}'", t.line, t.col)
            opener = stack.pop()
            if OPENERS[opener.kind] != t.kind:
                raise ParseError(
                    f"'{t.kind}' closes '{opener.kind}' opened at line {opener.line}, column {opener.col}",
                    t.line, t.col)
    if stack:
        t = stack[-1]
        raise ParseError(f"unclosed '{t.kind}'", t.line, t.col)


def bracket_depth(text: str) -> int:
    """Net count of unclosed brackets; used by the REPL to decide when a form is complete."""
    depth = 0
    try:
        toks = tokenize(text, check_brackets=False)
    except ParseError:
        return 0
    for t in toks:
        if t.kind in OPENERS:
            depth += 1
        elif t.kind in CLOSERS:
            depth -= 1
    return depth


_EXPR_KEYWORDS = {"lambda", "if", "let", "letrec", "match-all", "match", "matcher",
                  "algebraic-data-matcher", "define"}


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- helpers --
    def peek(self, k: int = 0) -> Token | None:
        j = self.pos + k
        return self.tokens[j] if j < len(self.tokens) else None

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            last = self.tokens[-1] if self.tokens else None
            raise ParseError("unexpected end of input",
                             last.line if last else 1, last.col if last else 1)
        self.pos += 1
        return t

    def expect(self, kind: str, what: str = "") -> Token:
        t = self.next()
        if t.kind != kind:
            raise self.error(t, f"expected {what or repr(kind)}")
        return t

    def at(self, kind: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t is not None and t.kind == kind

    def at_symbol(self, name: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t is not None and t.kind == SYMBOL and t.value == name

    @staticmethod
    def error(t: Token, msg: str) -> ParseError:
        return ParseError(f"{msg}, found {_describe(t)}", t.line, t.col)

    def until(self, kind: str):
        while not self.at(kind):
            if self.peek() is None:
                self.next()
            yield

    # -- top level --
    def parse_program(self) -> list:
        forms = []
        while self.peek() is not None:
            forms.append(self.parse_toplevel())
        return forms

    def parse_toplevel(self):
        t = self.peek()
        if t.kind == OPEN_PAREN and self.at_symbol("define", 1):
            self.next()
            self.next()
            name = self.expect(PATVAR, "'$name' after define").value
            expr = self.parse_expr()
            self.expect(CLOSE_PAREN, "')' closing define")
            form = Define(name, expr)
        else:
            form = self.parse_expr()
        return form

    # -- expressions --
    def parse_expr(self):
        t = self.next()
        k = t.kind
        if k == INT:
            return IntLit(t.value)
        if k == BOOL:
            return BoolLit(t.value)
        if k == STRING:
            return StrLit(t.value)
        if k == SYMBOL:
            if t.value == "something":
                return SomethingExpr()
            if t.value in _EXPR_KEYWORDS:
                raise self.error(t, f"keyword '{t.value}' used as a variable")
            return Var(t.value, self.parse_indices())
        if k == OPEN_ANGLE:
            ctor = self.expect(SYMBOL, "constructor name")
            if not ctor.value[0].isupper():
                raise self.error(ctor, "data constructor names must start with an uppercase letter")
            args = [self.parse_expr() for _ in self.until(CLOSE_ANGLE)]
            self.next()
            return DataExpr(ctor.value, tuple(args))
        if k == OPEN_BRACKET:
            items = [self.parse_expr() for _ in self.until(CLOSE_BRACKET)]
            self.next()
            return TupleExpr(tuple(items))
        if k == OPEN_BRACE:
            items = [self.parse_expr() for _ in self.until(CLOSE_BRACE)]
            self.next()
            return CollectionExpr(tuple(items))
        if k == OPEN_HASH:
            pairs = []
            for _ in self.until(CLOSE_HASH):
                self.expect(OPEN_BRACKET, "'[' starting a hash entry")
                key = self.expect(INT, "integer hash key").value
                val = self.parse_expr()
                self.expect(CLOSE_BRACKET, "']' closing a hash entry")
                pairs.append((key, val))
            self.next()
            return HashExpr(tuple(pairs))
        if k == OPEN_PAREN:
            return self.parse_compound(t)
        if k == AT:
            raise self.error(t, "'@' splicing is not supported")
        raise self.error(t, "expected an expression")

    def parse_indices(self) -> tuple:
        indices = []
        while self.at(INDEX):
            self.next()
            t = self.peek()
            if t is None:
                self.next()
            if t.kind == INT:
                self.next()
                indices.append(IntLit(t.value))
            elif t.kind == SYMBOL:
                self.next()
                indices.append(Var(t.value))
            elif t.kind == OPEN_PAREN:
                indices.append(self.parse_expr())
            else:
                raise self.error(t, "expected an index after '_'")
        return tuple(indices)

    def parse_compound(self, open_tok: Token):
        head = self.peek()
        if head is None or head.kind == CLOSE_PAREN:
            raise ParseError("empty application '()'", open_tok.line, open_tok.col)
        if head.kind == SYMBOL and head.value in _EXPR_KEYWORDS:
            self.next()
            form = getattr(self, "parse_" + head.value.replace("-", "_"))(head)
            self.expect(CLOSE_PAREN, f"')' closing {head.value}")
            return form
        fn = self.parse_expr()
        args = [self.parse_expr() for _ in self.until(CLOSE_PAREN)]
        self.next()
        return App(fn, tuple(args))

    def parse_lambda(self, kw):
        self.expect(OPEN_BRACKET, "'[' starting lambda parameters")
        params = []
        for _ in self.until(CLOSE_BRACKET):
            params.append(self.expect(PATVAR, "'$param'").value)
        self.next()
        return Lambda(tuple(params), self.parse_expr())

    def parse_if(self, kw):
        return If(self.parse_expr(), self.parse_expr(), self.parse_expr())

    def _bindings(self):
        self.expect(OPEN_BRACE, "'{' starting bindings")
        out = []
        for _ in self.until(CLOSE_BRACE):
            self.expect(OPEN_BRACKET, "'[' starting a binding")
            name = self.expect(PATVAR, "'$name' in binding").value
            expr = self.parse_expr()
            self.expect(CLOSE_BRACKET, "']' closing a binding")
            out.append((name, expr))
        self.next()
        return tuple(out)

    def parse_let(self, kw):
        return Let(self._bindings(), self.parse_expr())

    def parse_letrec(self, kw):
        return LetRec(self._bindings(), self.parse_expr())

    def parse_define(self, kw):
        raise self.error(kw, "define is only allowed at top level")

    def parse_match_all(self, kw):
        target = self.parse_expr()
        matcher = self.parse_expr()
        self.expect(OPEN_BRACKET, "'[' starting the match clause")
        pat = self.parse_clause_pattern()
        body = self.parse_expr()
        self.expect(CLOSE_BRACKET, "']' closing the match clause")
        return MatchAll(target, matcher, pat, body)

    def parse_match(self, kw):
        target = self.parse_expr()
        matcher = self.parse_expr()
        self.expect(OPEN_BRACE, "'{' starting match clauses")
        clauses = []
        for _ in self.until(CLOSE_BRACE):
            self.expect(OPEN_BRACKET, "'[' starting a match clause")
            pat = self.parse_clause_pattern()
            body = self.parse_expr()
            self.expect(CLOSE_BRACKET, "']' closing a match clause")
            clauses.append((pat, body))
        self.next()
        if not clauses:
            raise self.error(kw, "match needs at least one clause")
        return Match(target, matcher, tuple(clauses))

    def parse_clause_pattern(self):
        t = self.peek()
        pat = self.parse_pattern()
        try:
            validate_pattern(pat)
        except ParseError as e:
            raise ParseError(e.message, t.line, t.col) from None
        return pat

    def parse_matcher(self, kw):
        self.expect(OPEN_BRACE, "'{' starting matcher clauses")
        clauses = []
        for _ in self.until(CLOSE_BRACE):
            self.expect(OPEN_BRACKET, "'[' starting a matcher clause")
            pp = self.parse_pp()
            nm = self.parse_expr()
            self.expect(OPEN_BRACE, "'{' starting data clauses")
            dcs = []
            for _ in self.until(CLOSE_BRACE):
                self.expect(OPEN_BRACKET, "'[' starting a data clause")
                dp = self.parse_dp()
                dcs.append((dp, self.parse_expr()))
                self.expect(CLOSE_BRACKET, "']' closing a data clause")
            self.next()
            self.expect(CLOSE_BRACKET, "']' closing a matcher clause")
            clauses.append(MatcherClause(pp, nm, tuple(dcs)))
        self.next()
        return MatcherExpr(tuple(clauses))

    def parse_algebraic_data_matcher(self, kw):
        self.expect(OPEN_BRACE, "'{' starting constructor list")
        ctors = []
        for _ in self.until(CLOSE_BRACE):
            self.expect(OPEN_ANGLE, "'<' starting a constructor")
            name = self.expect(SYMBOL, "constructor name")
            if not name.value[0].islower():
                raise self.error(name, "pattern constructor names must start with a lowercase letter")
            args = [self.parse_expr() for _ in self.until(CLOSE_ANGLE)]
            self.next()
            ctors.append((name.value, tuple(args)))
        self.next()
        return AlgebraicDataMatcher(tuple(ctors))

    def parse_pp(self):
        t = self.next()
        if t.kind == HOLE:
            return PPHole()
        if t.kind == VALUE:
            return PPValueHole(self.expect(PATVAR, "'$name' after ','").value)
        if t.kind == OPEN_ANGLE:
            ctor = self.expect(SYMBOL, "pattern constructor name").value
            args = [self.parse_pp() for _ in self.until(CLOSE_ANGLE)]
            self.next()
            return PPInductive(ctor, tuple(args))
        raise self.error(t, "expected a pattern-pattern ('$', ',$x' or '<ctor ...>')")

    def parse_dp(self):
        t = self.next()
        if t.kind == PATVAR:
            return DPVar(t.value)
        if t.kind == WILDCARD:
            return DPWildcard()
        if t.kind == OPEN_ANGLE:
            ctor = self.expect(SYMBOL, "data constructor name").value
            args = [self.parse_dp() for _ in self.until(CLOSE_ANGLE)]
            self.next()
            names = [a.name for a in args if isinstance(a, DPVar)]
            if len(names) != len(set(names)):
                raise self.error(t, "duplicate variable in data pattern")
            return DPInductive(ctor, tuple(args))
        raise self.error(t, "expected a data pattern ('$x', '_' or '<Ctor ...>')")

    # -- patterns --
    def parse_pattern(self):
        t = self.next()
        k = t.kind
        if k == WILDCARD:
            return Wildcard()
        if k == PATVAR:
            return PatVar(t.value, self.parse_indices())
        if k == VALUE:
            return ValuePat(self.parse_expr())
        if k == NOT:
            return NotPat(self.parse_pattern())
        if k == ELLIPSIS:
            return EllipsisPat()
        if k == OPEN_ANGLE:
            ctor = self.expect(SYMBOL, "pattern constructor name")
            if not ctor.value[0].islower():
                raise self.error(ctor, "pattern constructor names must start with a lowercase letter")
            args = [self.parse_pattern() for _ in self.until(CLOSE_ANGLE)]
            self.next()
            return InductivePat(ctor.value, tuple(args))
        if k == OPEN_BRACKET:
            items = [self.parse_pattern() for _ in self.until(CLOSE_BRACKET)]
            self.next()
            return TuplePat(tuple(items))
        if k == OPEN_PAREN:
            head = self.next()
            if head.kind == SYMBOL and head.value in ("|", "&"):
                parts = [self.parse_pattern() for _ in self.until(CLOSE_PAREN)]
                self.next()
                return OrPat(tuple(parts)) if head.value == "|" else AndPat(tuple(parts))
            if head.kind == SYMBOL and head.value == "loop":
                var = self.expect(PATVAR, "'$index' after loop").value
                rng = self.parse_index_range()
                rep = self.parse_pattern()
                end = self.parse_pattern()
                self.expect(CLOSE_PAREN, "')' closing loop")
                return LoopPat(var, rng, rep, end)
            if head.kind == SYMBOL and head.value == "let":
                self.expect(OPEN_BRACE, "'{' starting let-pattern bindings")
                binds = []
                for _ in self.until(CLOSE_BRACE):
                    self.expect(OPEN_BRACKET, "'[' starting a binding")
                    v = self.expect(PATVAR, "'$name' in binding")
                    var = PatVar(v.value, self.parse_indices())
                    binds.append((var, self.parse_expr()))
                    self.expect(CLOSE_BRACKET, "']' closing a binding")
                self.next()
                body = self.parse_pattern()
                self.expect(CLOSE_PAREN, "')' closing let pattern")
                return LetPat(tuple(binds), body)
            raise self.error(head, "expected '|', '&', 'loop' or 'let' in pattern")
        raise self.error(t, "expected a pattern")

    def _starts_pattern(self) -> bool:
        t = self.peek()
        if t is None:
            return False
        if t.kind in (PATVAR, WILDCARD, VALUE, NOT):
            return True
        return t.kind == OPEN_PAREN and (self.at_symbol("&", 1) or self.at_symbol("|", 1))

    def parse_index_range(self) -> IndexRange:
        open_tok = self.expect(OPEN_BRACKET, "'[' starting an index range")
        parts = []
        while not self.at(CLOSE_BRACKET):
            if self.peek() is None:
                self.next()
            if len(parts) == 3:
                raise self.error(self.peek(), "an index range has at most three components")
            if len(parts) == 0:
                parts.append(("expr", self.parse_expr()))
            elif len(parts) == 1 and self._starts_pattern():
                parts.append(("pattern", self.parse_pattern()))
            elif len(parts) == 1:
                parts.append(("expr", self.parse_expr()))
            else:
                if parts[1][0] == "pattern":
                    raise self.error(self.peek(), "end numbers must precede the end-number pattern")
                parts.append(("pattern", self.parse_pattern()))
        self.next()
        if not parts:
            raise ParseError("an index range needs a start number", open_tok.line, open_tok.col)
        return desugar_index_range(parts)


def desugar_index_range(parts) -> IndexRange:
    """Complete a 1-, 2- or 3-component index range.

    ``parts`` is a list of ``(kind, node)`` with kind ``"expr"`` or ``"pattern"``.
    """
    if not 1 <= len(parts) <= 3:
        raise ParseError("an index range has one to three components")
    start = parts[0][1]
    from_start = App(Var("from"), (start,))
    if len(parts) == 1:
        return IndexRange(start, from_start, Wildcard())
    kind, second = parts[1]
    if len(parts) == 2:
        if kind == "pattern":
            return IndexRange(start, from_start, second)
        if isinstance(second, CollectionExpr):
            return IndexRange(start, second, Wildcard())
        return IndexRange(start, CollectionExpr((second,)), Wildcard())
    return IndexRange(start, second, parts[2][1])


# --- static checks on ellipsis placement -----------------------------------

def _free_ellipses(p) -> int:
    """Ellipses in ``p`` that refer to the innermost loop enclosing ``p``."""
    match p:
        case EllipsisPat():
            return 1
        case LoopPat(var, rng, rep, end):
            n = _free_ellipses(rep)
            if n != 1:
                raise ParseError(
                    f"the repeat pattern of loop ${var} must contain exactly one '...', found {n}")
            # the end pattern runs after this loop's context is popped
            return _free_ellipses(end) + _free_ellipses(rng.end_pattern)
        case NotPat(inner):
            if _free_ellipses(inner):
                raise ParseError("'...' is not allowed inside a not-pattern")
            return 0
        case InductivePat(_, items) | TuplePat(items) | OrPat(items) | AndPat(items):
            return sum(_free_ellipses(x) for x in items)
        case LetPat(_, body):
            return _free_ellipses(body)
    return 0


def validate_pattern(p) -> None:
    """Reject misplaced ellipses in a match-clause pattern."""
    if _free_ellipses(p):
        raise ParseError("'...' outside of a loop pattern")


def _describe(t: Token) -> str:
    if t.kind in (INT, SYMBOL):
        return f"'{t.value}'"
    if t.kind == STRING:
        return "a string"
    if t.kind == PATVAR:
        return f"'${t.value}'"
    if t.kind == BOOL:
        return "#t" if t.value else "#f"
    return f"'{t.kind}'" if t.kind not in (INDEX, HOLE) else {"index": "'_'", "hole": "'$'"}[t.kind]


def parse_program(text: str) -> list:
    """Parse source text into a list of top-level forms."""
    return Parser(tokenize(text)).parse_program()


def parse_located(text: str) -> list[tuple[object, int, int]]:
    """Like ``parse_program`` but pairs each form with its starting line and column."""
    p = Parser(tokenize(text))
    out = []
    while p.peek() is not None:
        t = p.peek()
        out.append((p.parse_toplevel(), t.line, t.col))
    return out


def parse_expr(text: str):
    p = Parser(tokenize(text))
    e = p.parse_expr()
    if p.peek() is not None:
        raise p.error(p.peek(), "expected end of input")
    return e


def parse_pattern(text: str):
    p = Parser(tokenize(text))
    pat = p.parse_pattern()
    if p.peek() is not None:
        raise p.error(p.peek(), "expected end of input")
    return pat


def parse_index_range(text: str) -> IndexRange:
    return Parser(tokenize(text)).parse_index_range()
