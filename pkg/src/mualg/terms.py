"""Abstract syntax of modal mu-calculus terms.

Terms are immutable trees.  Generators (``Gen``) are the propositional
constants of the free algebra; variables (``Var``) are the positions that
can be bound by ``Mu``/``Nu`` or left free as parameters of a system.
``Arrow`` is kept as a first-class node because equation systems are
classified by its syntactic presence.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Mapping


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        from .printing import print_term

        return print_term(self)


@dataclass(frozen=True, slots=True)
class Gen(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str


@dataclass(frozen=True, slots=True)
class _Top(Term):
    pass


@dataclass(frozen=True, slots=True)
class _Bot(Term):
    pass


TOP = _Top()
BOT = _Bot()


@dataclass(frozen=True, slots=True)
class And(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Or(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Not(Term):
    body: Term


@dataclass(frozen=True, slots=True)
class Dia(Term):
    act: str
    body: Term


@dataclass(frozen=True, slots=True)
class Box(Term):
    act: str
    body: Term


@dataclass(frozen=True, slots=True)
class Mu(Term):
    var: str
    body: Term


@dataclass(frozen=True, slots=True)
class Nu(Term):
    var: str
    body: Term


@dataclass(frozen=True, slots=True)
class Arrow(Term):
    """``[a] (t1 | ... | tn) & <a> t1 & ... & <a> tn``, kept unexpanded."""

    act: str
    bodies: tuple[Term, ...]


Binder = (Mu, Nu)
Modal = (Dia, Box, Arrow)


def conj(terms: Iterable[Term]) -> Term:
    terms = list(terms)
    if not terms:
        return TOP
    return reduce(And, terms)


def disj(terms: Iterable[Term]) -> Term:
    terms = list(terms)
    if not terms:
        return BOT
    return reduce(Or, terms)


def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, (And, Or)):
        return (t.left, t.right)
    if isinstance(t, (Not, Dia, Box, Mu, Nu)):
        return (t.body,)
    if isinstance(t, Arrow):
        return t.bodies
    return ()


def rebuild(t: Term, kids: tuple[Term, ...]) -> Term:
    """Return a node of the same kind as ``t`` over new children."""
    if isinstance(t, And):
        return And(*kids)
    if isinstance(t, Or):
        return Or(*kids)
    if isinstance(t, Not):
        return Not(kids[0])
    if isinstance(t, Dia):
        return Dia(t.act, kids[0])
    if isinstance(t, Box):
        return Box(t.act, kids[0])
    if isinstance(t, Mu):
        return Mu(t.var, kids[0])
    if isinstance(t, Nu):
        return Nu(t.var, kids[0])
    if isinstance(t, Arrow):
        return Arrow(t.act, tuple(kids))
    return t


def subterms(t: Term) -> Iterator[Term]:
    """All syntactic subterms, pre-order, with repetitions."""
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        stack.extend(reversed(children(s)))


def size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


def depth(t: Term) -> int:
    kids = children(t)
    return 1 + max((depth(k) for k in kids), default=0)


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, (Mu, Nu)):
        return free_vars(t.body) - {t.var}
    out: frozenset[str] = frozenset()
    for k in children(t):
        out |= free_vars(k)
    return out


def bound_vars(t: Term) -> frozenset[str]:
    return frozenset(s.var for s in subterms(t) if isinstance(s, (Mu, Nu)))


def all_var_names(t: Term) -> frozenset[str]:
    names = set(bound_vars(t))
    names.update(s.name for s in subterms(t) if isinstance(s, Var))
    return frozenset(names)


def generators(t: Term) -> frozenset[str]:
    return frozenset(s.name for s in subterms(t) if isinstance(s, Gen))


def actions(t: Term) -> frozenset[str]:
    return frozenset(s.act for s in subterms(t) if isinstance(s, (Dia, Box, Arrow)))


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    stem = base.rstrip("0123456789_") or "x"
    i = 1
    while f"{stem}_{i}" in avoid:
        i += 1
    return f"{stem}_{i}"


def substitute(t: Term, binding: Mapping[str, Term]) -> Term:
    """Capture-avoiding simultaneous substitution of variables."""
    if not binding:
        return t
    return _subst(t, dict(binding))


def _subst(t: Term, b: dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return b.get(t.name, t)
    if isinstance(t, (Mu, Nu)):
        fv = free_vars(t.body)
        inner = {k: v for k, v in b.items() if k != t.var and k in fv}
        if not inner:
            return t
        avoid: set[str] = set()
        for v in inner.values():
            avoid |= free_vars(v)
        var, body = t.var, t.body
        if var in avoid:
            new = fresh_name(var, avoid | fv | set(inner) | all_var_names(body))
            body = _subst(body, {var: Var(new)})
            var = new
        return type(t)(var, _subst(body, inner))
    kids = children(t)
    if not kids:
        return t
    new_kids = tuple(_subst(k, b) for k in kids)
    if new_kids == kids:
        return t
    return rebuild(t, new_kids)


def canonical(t: Term) -> Term:
    """Rename bound variables by binder depth so alpha-equivalent terms coincide."""
    return _canon(t, {}, 0)


def _canon(t: Term, names: dict[str, str], level: int) -> Term:
    if isinstance(t, Var):
        return Var(names.get(t.name, t.name))
    if isinstance(t, (Mu, Nu)):
        new = f"%{level}"
        inner = dict(names)
        inner[t.var] = new
        return type(t)(new, _canon(t.body, inner, level + 1))
    kids = children(t)
    if not kids:
        return t
    return rebuild(t, tuple(_canon(k, names, level) for k in kids))


def alpha_eq(a: Term, b: Term) -> bool:
    return canonical(a) == canonical(b)


class TermSet:
    """Finite set of terms identified modulo bound-variable renaming."""

    def __init__(self, terms: Iterable[Term] = ()):
        self._by_key: dict[Term, Term] = {}
        for t in terms:
            self.add(t)

    def add(self, t: Term) -> bool:
        key = canonical(t)
        if key in self._by_key:
            return False
        self._by_key[key] = t
        return True

    def __contains__(self, t: Term) -> bool:
        return canonical(t) in self._by_key

    def __iter__(self) -> Iterator[Term]:
        return iter(self._by_key.values())

    def __len__(self) -> int:
        return len(self._by_key)

    def keys(self) -> frozenset[Term]:
        return frozenset(self._by_key)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TermSet):
            return NotImplemented
        return self.keys() == other.keys()

    def __repr__(self) -> str:
        return "TermSet({" + ", ".join(sorted(str(t) for t in self)) + "})"
