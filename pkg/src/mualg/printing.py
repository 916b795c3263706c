"""Canonical concrete syntax for terms."""
from __future__ import annotations

from .terms import (
    And, Arrow, Box, Dia, Gen, Mu, Not, Nu, Or, Term, Var, _Bot, _Top,
)

_BINDER, _OR, _AND, _UNARY, _ATOM = range(5)


def print_term(t: Term) -> str:
    return _p(t, _BINDER)


def _level(t: Term) -> int:
    if isinstance(t, (Mu, Nu)):
        return _BINDER
    if isinstance(t, Or):
        return _OR
    if isinstance(t, And):
        return _AND
    if isinstance(t, (Not, Dia, Box)):
        return _UNARY
    return _ATOM


def _p(t: Term, ctx: int) -> str:
    s = _raw(t)
    return f"({s})" if _level(t) < ctx else s


def _raw(t: Term) -> str:
    if isinstance(t, (Gen, Var)):
        return t.name
    if isinstance(t, _Top):
        return "T"
    if isinstance(t, _Bot):
        return "F"
    if isinstance(t, Or):
        return f"{_p(t.left, _OR)} | {_p(t.right, _AND)}"
    if isinstance(t, And):
        return f"{_p(t.left, _AND)} & {_p(t.right, _UNARY)}"
    if isinstance(t, Not):
        return "~" + _p(t.body, _UNARY)
    if isinstance(t, Dia):
        return f"<{t.act}> " + _p(t.body, _UNARY)
    if isinstance(t, Box):
        return f"[{t.act}] " + _p(t.body, _UNARY)
    if isinstance(t, Mu):
        return f"mu {t.var} . " + _p(t.body, _BINDER)
    if isinstance(t, Nu):
        return f"nu {t.var} . " + _p(t.body, _BINDER)
    if isinstance(t, Arrow):
        inner = ", ".join(_p(b, _BINDER) for b in t.bodies)
        return f"arrow {t.act} {{{inner}}}" if inner else f"arrow {t.act} {{}}"
    raise TypeError(f"not a term: {t!r}")
