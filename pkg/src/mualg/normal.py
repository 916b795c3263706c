"""Normal forms and syntactic analyses of terms."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .terms import (
    BOT, TOP, And, Arrow, Box, Dia, Gen, Mu, Not, Nu, Or, Term, TermSet, Var,
    _Bot, _Top, canonical, children, conj, disj, free_vars, rebuild, substitute,
    subterms,
)

SIGMA1 = "sigma1"
PI1 = "pi1"
COMP = "comp_sigma1_pi1"
GENERAL = "general"


# -- negation normal form -------------------------------------------------

def nnf(t: Term) -> Term:
    """Push negations down to generators and free variables."""
    return _nnf(t, False, frozenset())


def _nnf(t: Term, neg: bool, flip: frozenset[str]) -> Term:
    if isinstance(t, Var):
        if neg != (t.name in flip):
            return Not(t)
        return t
    if isinstance(t, Gen):
        return Not(t) if neg else t
    if isinstance(t, _Top):
        return BOT if neg else TOP
    if isinstance(t, _Bot):
        return TOP if neg else BOT
    if isinstance(t, Not):
        return _nnf(t.body, not neg, flip)
    if isinstance(t, And):
        kind = Or if neg else And
        return kind(_nnf(t.left, neg, flip), _nnf(t.right, neg, flip))
    if isinstance(t, Or):
        kind = And if neg else Or
        return kind(_nnf(t.left, neg, flip), _nnf(t.right, neg, flip))
    if isinstance(t, Dia):
        kind = Box if neg else Dia
        return kind(t.act, _nnf(t.body, neg, flip))
    if isinstance(t, Box):
        kind = Dia if neg else Box
        return kind(t.act, _nnf(t.body, neg, flip))
    if isinstance(t, Arrow):
        if not neg:
            return Arrow(t.act, tuple(_nnf(b, False, flip) for b in t.bodies))
        negs = [_nnf(b, True, flip) for b in t.bodies]
        # not(box(join X) & dia x...) = dia(meet not-X) | box not-x ...
        return disj([Dia(t.act, conj(negs))] + [Box(t.act, n) for n in negs])
    if isinstance(t, (Mu, Nu)):
        if neg:
            kind = Nu if isinstance(t, Mu) else Mu
            return kind(t.var, _nnf(t.body, True, flip | {t.var}))
        return type(t)(t.var, _nnf(t.body, False, flip - {t.var}))
    raise TypeError(f"not a term: {t!r}")


def is_nnf(t: Term) -> bool:
    return all(isinstance(s.body, (Gen, Var)) for s in subterms(t) if isinstance(s, Not))


# -- simplification -------------------------------------------------------

def simplify(t: Term) -> Term:
    """Bottom-up unit, absorption-by-equality and normality rewrites."""
    kids = children(t)
    if kids:
        t = rebuild(t, tuple(simplify(k) for k in kids))
    if isinstance(t, And):
        l, r = t.left, t.right
        if l == BOT or r == BOT:
            return BOT
        if l == TOP:
            return r
        if r == TOP or l == r:
            return l
    elif isinstance(t, Or):
        l, r = t.left, t.right
        if l == TOP or r == TOP:
            return TOP
        if l == BOT:
            return r
        if r == BOT or l == r:
            return l
    elif isinstance(t, Not):
        if t.body == TOP:
            return BOT
        if t.body == BOT:
            return TOP
        if isinstance(t.body, Not):
            return t.body.body
    elif isinstance(t, Dia):
        if t.body == BOT:
            return BOT
    elif isinstance(t, Box):
        if t.body == TOP:
            return TOP
    elif isinstance(t, Arrow):
        if any(b == BOT for b in t.bodies):
            return BOT
    elif isinstance(t, (Mu, Nu)):
        if t.var not in free_vars(t.body):
            return t.body
    return t


def _flat(t: Term, kind) -> list[Term]:
    if isinstance(t, kind):
        return _flat(t.left, kind) + _flat(t.right, kind)
    return [t]


def normal_key(t: Term) -> Term:
    """Canonical representative: simplified, alpha-renamed, with flattened,
    sorted and deduplicated conjunctions and disjunctions."""
    return _key(canonical(simplify(t)))


def _key(t: Term) -> Term:
    if isinstance(t, (And, Or)):
        kind = type(t)
        parts = {}
        for p in _flat(t, kind):
            k = _key(p)
            for q in _flat(k, kind):
                parts[str(q)] = q
        if len(parts) == 1:
            return next(iter(parts.values()))
        items = [parts[s] for s in sorted(parts)]
        out = items[-1]
        for p in reversed(items[:-1]):
            out = kind(p, out)
        return out
    kids = children(t)
    if not kids:
        return t
    return rebuild(t, tuple(_key(k) for k in kids))


# -- guardedness ----------------------------------------------------------

def unguarded(t: Term, names: Iterable[str]) -> frozenset[str]:
    """Members of ``names`` with a free occurrence outside every modal operator."""
    return _ung(t, frozenset(names))


def _ung(t: Term, names: frozenset[str]) -> frozenset[str]:
    if not names:
        return frozenset()
    if isinstance(t, Var):
        return frozenset((t.name,)) & names
    if isinstance(t, (Dia, Box, Arrow)):
        return frozenset()
    if isinstance(t, (Mu, Nu)):
        return _ung(t.body, names - {t.var})
    out: frozenset[str] = frozenset()
    for k in children(t):
        out |= _ung(k, names)
    return out


def is_guarded(t: Term) -> bool:
    return all(
        s.var not in _ung(s.body, frozenset((s.var,)))
        for s in subterms(t)
        if isinstance(s, (Mu, Nu))
    )


def guard(t: Term) -> Term:
    """An equivalent term in which every bound variable is guarded.

    Works inside out.  For a binder over ``x`` whose body is already
    guarded in its own binders, inner fixed points hiding an unguarded
    ``x`` are unfolded once, after which every unguarded ``x`` sits at the
    lattice level and can be replaced by the bottom (least) or top
    (greatest) element without changing the fixed point.
    """
    if is_guarded(t):
        return t
    return simplify(_guard(t))


def _guard(t: Term) -> Term:
    if isinstance(t, (Mu, Nu)):
        body = _guard(t.body)
        body = _expose(body, t.var)
        unit = BOT if isinstance(t, Mu) else TOP
        body = _replace_unguarded(body, t.var, unit)
        return type(t)(t.var, simplify(body))
    kids = children(t)
    if not kids:
        return t
    return rebuild(t, tuple(_guard(k) for k in kids))


def _expose(t: Term, x: str) -> Term:
    if isinstance(t, (Dia, Box, Arrow)) or x not in _ung(t, frozenset((x,))):
        return t
    if isinstance(t, (Mu, Nu)):
        return _expose(unfold(t), x)
    kids = children(t)
    return rebuild(t, tuple(_expose(k, x) for k in kids))


def _replace_unguarded(t: Term, x: str, unit: Term) -> Term:
    if isinstance(t, Var):
        return unit if t.name == x else t
    if isinstance(t, (Dia, Box, Arrow)):
        return t
    if isinstance(t, (Mu, Nu)) and t.var == x:
        return t
    kids = children(t)
    if not kids:
        return t
    return rebuild(t, tuple(_replace_unguarded(k, x, unit) for k in kids))


# -- unfolding, closure, classification -----------------------------------

def unfold(t: Term) -> Term:
    if not isinstance(t, (Mu, Nu)):
        raise ValueError(f"unfold expects a fixed-point term, got {t}")
    return substitute(t.body, {t.var: t})


def fl_closure(t: Term) -> TermSet:
    """Subterms, where a fixed-point term contributes its one-step unfolding."""
    out = TermSet()
    work = [t]
    while work:
        s = work.pop()
        if not out.add(s):
            continue
        if isinstance(s, (Mu, Nu)):
            work.append(unfold(s))
        else:
            work.extend(children(s))
    return out


def classify(t: Term) -> str:
    has_mu = any(isinstance(s, Mu) for s in subterms(t))
    has_nu = any(isinstance(s, Nu) for s in subterms(t))
    if not has_nu:
        return SIGMA1
    if not has_mu:
        return PI1
    return GENERAL if _alternates(t, {}) else COMP


def _alternates(t: Term, kinds: dict[str, type]) -> bool:
    if isinstance(t, (Mu, Nu)):
        kind = type(t)
        if any(kinds.get(v, kind) is not kind for v in free_vars(t)):
            return True
        inner = dict(kinds)
        inner[t.var] = kind
        return _alternates(t.body, inner)
    return any(_alternates(k, kinds) for k in children(t))


# -- arrows and special conjunctions --------------------------------------

def is_literal(t: Term) -> bool:
    return isinstance(t, Gen) or (isinstance(t, Not) and isinstance(t.body, Gen))


def complement(lit: Term) -> Term:
    return lit.body if isinstance(lit, Not) else Not(lit)


def arrow(act: str, xs: Iterable[Term]) -> Term:
    """``[a](x1 | ... | xn) & <a>x1 & ... & <a>xn``; ``[a]F`` when empty."""
    xs = list(xs)
    return conj([Box(act, disj(xs))] + [Dia(act, x) for x in xs])


def expand_arrows(t: Term) -> Term:
    kids = children(t)
    if kids:
        t = rebuild(t, tuple(expand_arrows(k) for k in kids))
    if isinstance(t, Arrow):
        return arrow(t.act, t.bodies)
    return t


@dataclass(frozen=True)
class SpconSpec:
    """Literal set plus, per action, a block of variables."""

    literals: tuple[Term, ...]
    blocks: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        seen: set[str] = set()
        acts: set[str] = set()
        for act, xs in self.blocks:
            if act in acts:
                raise ValueError(f"action {act!r} listed twice")
            acts.add(act)
            for x in xs:
                if x in seen:
                    raise ValueError(f"variable {x!r} in two blocks")
                seen.add(x)
        for lit in self.literals:
            if not is_literal(lit):
                raise ValueError(f"not a literal: {lit}")

    @classmethod
    def make(cls, literals: Iterable[Term] = (), blocks: Mapping[str, Iterable[str]] | None = None):
        blocks = blocks or {}
        return cls(tuple(literals), tuple((a, tuple(xs)) for a, xs in blocks.items()))

    def coords(self) -> list[tuple[str, str]]:
        return [(a, x) for a, xs in self.blocks for x in xs]

    @property
    def arity(self) -> int:
        return sum(len(xs) for _, xs in self.blocks)

    def is_inconsistent(self) -> bool:
        lits = set(self.literals)
        return any(complement(l) in lits for l in lits)


def spcon(spec: SpconSpec, values: Mapping[str, Term] | None = None) -> Term:
    """The special conjunction, with variables optionally replaced by ``values``."""
    values = values or {}
    parts = list(spec.literals)
    for act, xs in spec.blocks:
        parts.append(arrow(act, [values.get(x, Var(x)) for x in xs]))
    return conj(parts)


def spcon_node(spec: SpconSpec, values: Mapping[str, Term] | None = None) -> Term:
    """Like ``spcon`` but keeping arrow nodes unexpanded."""
    values = values or {}
    parts = list(spec.literals)
    for act, xs in spec.blocks:
        parts.append(Arrow(act, tuple(values.get(x, Var(x)) for x in xs)))
    return conj(parts)


# -- clauses --------------------------------------------------------------

def _sorted_terms(ts: Iterable[Term]) -> list[Term]:
    return sorted(ts, key=str)


@dataclass(frozen=True)
class Clause:
    """``join(literals) | join_a(<a>d_a | join_{e in E_a} [a]e)``."""

    literals: frozenset = frozenset()
    dia: tuple = ()
    boxes: tuple = ()

    @classmethod
    def make(cls, literals: Iterable[Term] = (), dia: Mapping[str, Term] | None = None,
             boxes: Mapping[str, Iterable[Term]] | None = None) -> "Clause":
        dia = dia or {}
        boxes = boxes or {}
        return cls(
            frozenset(literals),
            tuple(sorted(dia.items())),
            tuple(sorted((a, frozenset(es)) for a, es in boxes.items() if es)),
        )

    def d(self, act: str) -> Term | None:
        for a, t in self.dia:
            if a == act:
                return t
        return None

    def E(self, act: str) -> frozenset:
        for a, es in self.boxes:
            if a == act:
                return es
        return frozenset()

    def actions(self) -> set[str]:
        return {a for a, _ in self.dia} | {a for a, _ in self.boxes}

    def is_top(self) -> bool:
        """Syntactic test only: a top literal or a complementary pair."""
        if TOP in self.literals:
            return True
        return any(Not(l) in self.literals for l in self.literals)

    def to_term(self) -> Term:
        parts = _sorted_terms(self.literals)
        for a in sorted(self.actions()):
            d = self.d(a)
            if d is not None:
                parts.append(Dia(a, d))
            parts.extend(Box(a, e) for e in _sorted_terms(self.E(a)))
        return disj(parts)

    def __str__(self) -> str:
        return str(self.to_term())


class _Proto:
    __slots__ = ("lits", "dia", "box")

    def __init__(self, lits=(), dia=None, box=None):
        self.lits = set(lits)
        self.dia = dia or {}
        self.box = box or {}

    def merge(self, other: "_Proto") -> "_Proto":
        out = _Proto(self.lits | other.lits)
        for src in (self.dia, other.dia):
            for a, ds in src.items():
                lst = out.dia.setdefault(a, [])
                lst.extend(d for d in ds if d not in lst)
        for src in (self.box, other.box):
            for a, es in src.items():
                out.box.setdefault(a, set()).update(es)
        return out

    def clause(self) -> Clause:
        return Clause.make(self.lits, {a: disj(ds) for a, ds in self.dia.items()}, self.box)


def _is_clause_literal(t: Term) -> bool:
    return isinstance(t, (Gen, Var)) or (isinstance(t, Not) and isinstance(t.body, (Gen, Var)))


def expose_top(t: Term) -> Term:
    """Unfold fixed points and expand arrows outside every modal operator."""
    if isinstance(t, (Mu, Nu)):
        return expose_top(unfold(t))
    if isinstance(t, Arrow):
        return expose_top(arrow(t.act, t.bodies))
    if isinstance(t, (And, Or)):
        return type(t)(expose_top(t.left), expose_top(t.right))
    return t


def modal_cnf(t: Term) -> list[Clause]:
    """Clauses whose meet equals ``t``; ``t`` must be in negation normal form."""
    g = expose_top(guard(t))
    out: list[Clause] = []
    seen = set()
    for p in _cnf(g):
        c = p.clause()
        if c.is_top() or c in seen:
            continue
        seen.add(c)
        out.append(c)
    return out


def _cnf(t: Term) -> list[_Proto]:
    if isinstance(t, _Top):
        return []
    if isinstance(t, _Bot):
        return [_Proto()]
    if _is_clause_literal(t):
        return [_Proto((t,))]
    if isinstance(t, Dia):
        return [_Proto(dia={t.act: [t.body]})]
    if isinstance(t, Box):
        return [_Proto(box={t.act: {t.body}})]
    if isinstance(t, And):
        return _cnf(t.left) + _cnf(t.right)
    if isinstance(t, Or):
        left, right = _cnf(t.left), _cnf(t.right)
        return [p.merge(q) for p in left for q in right]
    raise ValueError(f"cannot put into clause form: {t}")


def clauses_term(clauses: Iterable[Clause]) -> Term:
    return conj(c.to_term() for c in clauses)


def replace_unguarded(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Replace the unguarded free occurrences of the mapped variables.

    Inner fixed points are guarded and those hiding such an occurrence are
    unfolded first, so every replaced occurrence sits outside all binders.
    """
    t = guard(t)
    for x in mapping:
        t = _expose(t, x)
    return _replace_many(t, dict(mapping))


def _replace_many(t: Term, mapping: dict) -> Term:
    if not mapping:
        return t
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, (Dia, Box, Arrow)):
        return t
    if isinstance(t, (Mu, Nu)):
        inner = {k: v for k, v in mapping.items() if k != t.var}
        return type(t)(t.var, _replace_many(t.body, inner))
    kids = children(t)
    if not kids:
        return t
    return rebuild(t, tuple(_replace_many(k, mapping) for k in kids))
