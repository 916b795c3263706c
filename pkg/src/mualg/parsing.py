"""Recursive-descent parser for the concrete term syntax.

    T  F  ~t  t & t  t | t  <a> t  [a] t  mu x . t  nu x . t
    arrow a { t, ... }  ( t )

``~`` and the modal prefixes bind tightest, then ``&``, then ``|``; the
binders ``mu``/``nu`` bind weakest and extend as far right as possible.
"""
from __future__ import annotations

import re
from typing import Iterable

from .terms import (
    BOT, TOP, And, Arrow, Box, Dia, Gen, Mu, Not, Nu, Or, Term, Var, children,
)

_TOKEN = re.compile(r"\s*(?:([a-z][a-z0-9_]*)|([TF])|(\S))")
_KEYWORDS = {"mu", "nu", "arrow"}


class TermSyntaxError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} at position {pos}")


class PositivityError(TermSyntaxError):
    pass


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # pragma: no cover - the pattern always matches non-space
            raise TermSyntaxError("unexpected input", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            kind = "kw" if m.group(1) in _KEYWORDS else "id"
            out.append((kind, m.group(1), start))
        elif m.group(2):
            out.append(("const", m.group(2), start))
        else:
            out.append(("sym", m.group(3), start))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, variables: frozenset[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.variables = variables

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, val, pos = self.take()
        if val != value or kind == "eof":
            raise TermSyntaxError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def ident(self) -> str:
        kind, val, pos = self.take()
        if kind != "id":
            raise TermSyntaxError(f"expected identifier, found {val or 'end of input'!r}", pos)
        return val

    def parse(self) -> Term:
        t = self.expr(frozenset())
        kind, val, pos = self.peek()
        if kind != "eof":
            raise TermSyntaxError(f"unexpected {val!r}", pos)
        return t

    def expr(self, scope: frozenset[str]) -> Term:
        t = self.conj(scope)
        while self.peek()[1] == "|" and self.peek()[0] == "sym":
            self.take()
            t = Or(t, self.conj(scope))
        return t

    def conj(self, scope: frozenset[str]) -> Term:
        t = self.unary(scope)
        while self.peek()[1] == "&" and self.peek()[0] == "sym":
            self.take()
            t = And(t, self.unary(scope))
        return t

    def unary(self, scope: frozenset[str]) -> Term:
        kind, val, pos = self.peek()
        if kind == "sym" and val == "~":
            self.take()
            return Not(self.unary(scope))
        if kind == "sym" and val == "<":
            self.take()
            act = self.ident()
            self.expect(">")
            return Dia(act, self.unary(scope))
        if kind == "sym" and val == "[":
            self.take()
            act = self.ident()
            self.expect("]")
            return Box(act, self.unary(scope))
        if kind == "kw" and val in ("mu", "nu"):
            self.take()
            var = self.ident()
            self.expect(".")
            body = self.expr(scope | {var})
            return Mu(var, body) if val == "mu" else Nu(var, body)
        return self.atom(scope)

    def atom(self, scope: frozenset[str]) -> Term:
        kind, val, pos = self.take()
        if kind == "const":
            return TOP if val == "T" else BOT
        if kind == "id":
            return Var(val) if val in scope or val in self.variables else Gen(val)
        if kind == "kw" and val == "arrow":
            act = self.ident()
            self.expect("{")
            bodies = []
            if self.peek()[1] != "}":
                bodies.append(self.expr(scope))
                while self.peek()[1] == ",":
                    self.take()
                    bodies.append(self.expr(scope))
            self.expect("}")
            return Arrow(act, tuple(bodies))
        if kind == "sym" and val == "(":
            t = self.expr(scope)
            self.expect(")")
            return t
        raise TermSyntaxError(f"unexpected {val or 'end of input'!r}", pos)


def parse_term(text: str, variables: Iterable[str] = ()) -> Term:
    """Parse ``text``; identifiers in ``variables`` or bound by a binder are variables."""
    t = _Parser(text, frozenset(variables)).parse()
    check_positive(t)
    return t


def check_positive(t: Term) -> None:
    """Raise ``PositivityError`` if a bound variable occurs under odd negations."""
    _positivity(t, {}, False)


def _positivity(t: Term, polarity: dict[str, bool], neg: bool) -> None:
    if isinstance(t, Var):
        start = polarity.get(t.name)
        if start is not None and start != neg:
            raise PositivityError(f"variable {t.name!r} under odd negations")
        return
    if isinstance(t, Not):
        _positivity(t.body, polarity, not neg)
        return
    if isinstance(t, (Mu, Nu)):
        inner = dict(polarity)
        inner[t.var] = neg
        _positivity(t.body, inner, neg)
        return
    for k in children(t):
        _positivity(k, polarity, neg)
