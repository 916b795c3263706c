"""Cover sets of monotone maps built from a small grammar of primitives.

A cover of ``d`` at ``m`` is a finite set ``C`` of input vectors with
``d(x) <= m`` iff ``x <= c`` for some ``c`` in ``C``.  Two backends share
one descriptor language: finite lattices (exact order) and terms (order
approximated by bounded model search).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .algebra import evaluate, iterate
from .kripke import KripkeModel, Sampler, check_leq, maximal
from .normal import (
    Clause, SpconSpec, arrow, fl_closure, is_literal, modal_cnf, nnf, normal_key, simplify,
)
from .terms import (
    BOT, TOP, And, Arrow, Dia, Mu, Not, Or, Term, Var, conj, fresh_name, free_vars, subterms,
)


# -- descriptors -------------------------------------------------------------

class Descriptor:
    arity: int = 1
    out: int = 1


@dataclass(frozen=True)
class Identity(Descriptor):
    arity: int = 1
    out: int = 1


@dataclass(frozen=True)
class Proj(Descriptor):
    index: int
    arity: int
    out: int = 1


@dataclass(frozen=True)
class Const(Descriptor):
    value: object
    arity: int = 1
    out: int = 1


@dataclass(frozen=True)
class ConstMeet(Descriptor):
    """``x -> k & x``."""
    value: object
    arity: int = 1
    out: int = 1


@dataclass(frozen=True)
class Join(Descriptor):
    arity: int = 2
    out: int = 1


@dataclass(frozen=True)
class DiaOp(Descriptor):
    act: str
    arity: int = 1
    out: int = 1


@dataclass(frozen=True)
class SpconOp(Descriptor):
    spec: SpconSpec
    out: int = 1

    @property
    def arity(self) -> int:
        return self.spec.arity


@dataclass(frozen=True)
class Pair(Descriptor):
    parts: tuple

    def __post_init__(self):
        if len({p.arity for p in self.parts}) > 1:
            raise ValueError("paired descriptors must share their arity")
        if any(p.out != 1 for p in self.parts):
            raise ValueError("paired descriptors must be scalar valued")

    @property
    def arity(self) -> int:
        return self.parts[0].arity if self.parts else 0

    @property
    def out(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class Compose(Descriptor):
    """``outer o inner``."""
    outer: Descriptor
    inner: Descriptor

    def __post_init__(self):
        if self.inner.out != self.outer.arity:
            raise ValueError("arity mismatch in composition")

    @property
    def arity(self) -> int:
        return self.inner.arity

    @property
    def out(self) -> int:
        return self.outer.out


@dataclass(frozen=True)
class ParamMu(Descriptor):
    """``y -> mu x. inner(x, y)`` with the first ``nx`` inputs bound."""
    inner: Descriptor
    nx: int = 1

    def __post_init__(self):
        if self.inner.out != self.nx or self.inner.arity < self.nx:
            raise ValueError("fixed point taken over coordinates the map does not produce")

    @property
    def arity(self) -> int:
        return self.inner.arity - self.nx

    @property
    def out(self) -> int:
        return self.nx


def compose(outer: Descriptor, *inners: Descriptor) -> Descriptor:
    inner = inners[0] if len(inners) == 1 else Pair(tuple(inners))
    return Compose(outer, inner)


# -- backends ------------------------------------------------------------------

class FiniteBackend:
    """Exact backend over the powerset algebra of a Kripke model."""

    exact = True

    def __init__(self, model: KripkeModel):
        self.alg = model
        self.top = model.top
        self.bot = model.bot

    def meet(self, a, b):
        return a & b

    def join(self, a, b):
        return a | b

    def leq(self, a, b):
        return a & ~b == 0

    def key(self, a):
        return a

    def elements(self):
        return self.alg.elements()

    def implies(self, k, m):
        return (self.top ^ k) | m

    def literal(self, lit: Term):
        return evaluate(self.alg, lit)

    def vec_leq(self, u, v):
        return all(self.leq(a, b) for a, b in zip(u, v))

    def prune(self, vecs):
        return sorted(maximal(vecs, self.vec_leq))


class SyntacticBackend:
    """Terms as elements; order only refuted, never proved."""

    exact = False

    def __init__(self, sampler: Sampler | None = None):
        self.sampler = sampler or Sampler(exhaustive_states=2, random_count=60)
        self.top = TOP
        self.bot = BOT
        self.caveats: list[str] = []

    def meet(self, a, b):
        return simplify(And(a, b))

    def join(self, a, b):
        return simplify(Or(a, b))

    def leq(self, a, b):
        return bool(check_leq(a, b, self.sampler))

    def key(self, a):
        return normal_key(a)

    def implies(self, k, m):
        return simplify(Or(nnf(Not(k)), m))

    def vec_leq(self, u, v):
        return all(self.leq(a, b) for a, b in zip(u, v))

    def prune(self, vecs):
        seen = {}
        for v in vecs:
            seen.setdefault(tuple(self.key(c) for c in v), tuple(v))
        return list(seen.values())


# -- evaluation of descriptors ---------------------------------------------------

def apply(d: Descriptor, vec: Sequence, be) -> tuple:
    vec = tuple(vec)
    if len(vec) != d.arity:
        raise ValueError(f"expected {d.arity} inputs, got {len(vec)}")
    syn = not be.exact
    if isinstance(d, Identity):
        return vec
    if isinstance(d, Proj):
        return (vec[d.index],)
    if isinstance(d, Const):
        return (d.value,)
    if isinstance(d, ConstMeet):
        return (be.meet(d.value, vec[0]),)
    if isinstance(d, Join):
        acc = be.bot
        for v in vec:
            acc = be.join(acc, v)
        return (acc,)
    if isinstance(d, DiaOp):
        return (Dia(d.act, vec[0]) if syn else be.alg.dia(d.act, vec[0]),)
    if isinstance(d, SpconOp):
        blocks = _block_slices(d.spec, vec)
        if syn:
            return (conj(list(d.spec.literals) + [arrow(a, xs) for a, xs in blocks]),)
        alg = be.alg
        acc = alg.top
        for lit in d.spec.literals:
            acc &= be.literal(lit)
        for a, xs in blocks:
            u = 0
            for x in xs:
                u |= x
                acc &= alg.dia(a, x)
            acc &= alg.box(a, u)
        return (acc,)
    if isinstance(d, Pair):
        return tuple(apply(p, vec, be)[0] for p in d.parts)
    if isinstance(d, Compose):
        return apply(d.outer, apply(d.inner, vec, be), be)
    if isinstance(d, ParamMu):
        if syn:
            return _syntactic_mu(d, vec)
        bots = tuple(be.bot for _ in range(d.nx))
        return iterate(lambda x: apply(d.inner, x + vec, be), bots)[-1]
    raise TypeError(f"unknown descriptor {d!r}")


def _block_slices(spec: SpconSpec, vec: tuple) -> list:
    out = []
    i = 0
    for act, xs in spec.blocks:
        out.append((act, vec[i:i + len(xs)]))
        i += len(xs)
    return out


def _syntactic_mu(d: ParamMu, vec: tuple) -> tuple:
    if d.nx != 1:
        raise ValueError("syntactic fixed points are built for one bound coordinate only")
    avoid = set()
    for v in vec:
        avoid |= {s.name for s in _vars(v)}
    z = fresh_name("z", avoid)
    body = apply(d.inner, (Var(z),) + vec, SyntacticBackend())[0]
    return (Mu(z, body),)


def _vars(t: Term):
    return [s for s in subterms(t) if isinstance(s, Var)]


# -- covers ------------------------------------------------------------------------

def _meet_vectors(be, vecs: Iterable[tuple], n: int) -> tuple:
    acc = tuple(be.top for _ in range(n))
    for v in vecs:
        acc = tuple(be.meet(a, b) for a, b in zip(acc, v))
    return acc


def _product_meet(be, families: list[list[tuple]], n: int) -> list[tuple]:
    acc = [tuple(be.top for _ in range(n))]
    for fam in families:
        acc = be.prune([tuple(be.meet(a, b) for a, b in zip(u, v)) for u in acc for v in fam])
        if not acc:
            return []
    return acc


def cover(d: Descriptor, m, be, budget: int = 4096) -> list[tuple]:
    """Cover set of ``d`` at ``m`` (a scalar, or a vector when ``d.out > 1``)."""
    target = tuple(m) if isinstance(m, (tuple, list)) else (m,)
    if len(target) != d.out:
        raise ValueError("target has the wrong number of coordinates")
    return be.prune(_cover(d, target, be, budget))


def _cover(d: Descriptor, m: tuple, be, budget: int) -> list[tuple]:
    n = d.arity
    top = be.top
    if isinstance(d, Identity):
        return [m]
    if isinstance(d, Proj):
        return [tuple(m[0] if j == d.index else top for j in range(n))]
    if isinstance(d, Const):
        if be.exact:
            ok = be.leq(d.value, m[0])
        else:
            ok = bool(check_leq(d.value, m[0], be.sampler))
            be.caveats.append("constant comparison decided by bounded model search")
        return [tuple(top for _ in range(n))] if ok else []
    if isinstance(d, ConstMeet):
        return [(be.implies(d.value, m[0]),)]
    if isinstance(d, Join):
        return [tuple(m[0] for _ in range(n))]
    if isinstance(d, DiaOp):
        if be.exact:
            return [(be.alg.dia_adjoint(d.act, m[0]),)]
        return [(dia_right_adjoint(d.act, modal_cnf(nnf(m[0]))),)]
    if isinstance(d, SpconOp):
        if be.exact:
            return _finite_spcon_cover(d.spec, m[0], be)
        clauses = modal_cnf(nnf(m[0]))
        fams = [spcon_cover(d.spec, c) for c in clauses]
        return _product_meet(be, fams, n)
    if isinstance(d, Pair):
        fams = [_cover(p, (mi,), be, budget) for p, mi in zip(d.parts, m)]
        return _product_meet(be, fams, n)
    if isinstance(d, Compose):
        out = []
        for c in _cover(d.outer, m, be, budget):
            out.extend(_cover(d.inner, c, be, budget))
        return out
    if isinstance(d, ParamMu):
        return mu_cover(d.inner, m, be, d.nx, budget)
    raise TypeError(f"no cover rule for {d!r}")


def _finite_spcon_cover(spec: SpconSpec, m: int, be: FiniteBackend) -> list[tuple]:
    """Meet over the coatoms ``S - {s}`` above ``m`` of the clause rule,
    reading each coatom as the clause with ``d_a = S - succ_a(s)`` and
    ``E_a = {S - {t} : t in succ_a(s)}``."""
    model = be.alg
    top = model.top
    coords = spec.coords()
    n = len(coords)
    lam = top
    for lit in spec.literals:
        lam &= be.literal(lit)
    fams = []
    for s in range(model.n):
        if m >> s & 1:
            continue
        if not lam >> s & 1:
            continue
        fam = []
        for act, xs in spec.blocks:
            succ = model.successors(act, s)
            d = top ^ succ
            for y in xs:
                fam.append(tuple(d if c == (act, y) else top for c in coords))
            t = 0
            rest = succ
            while rest:
                if rest & 1:
                    e = top ^ (1 << t)
                    fam.append(tuple((d | e) if c[0] == act else top for c in coords))
                rest >>= 1
                t += 1
        fams.append(be.prune(fam))
    return _product_meet(be, fams, n)


def dia_right_adjoint(act: str, clauses: Iterable[Clause]) -> Term:
    """Largest ``x`` with ``<act>x`` below the meet of ``clauses``: per
    clause, top for a (syntactically) top clause and otherwise its diamond
    body for ``act`` (bottom when absent); meets go to meets."""
    parts = []
    for c in clauses:
        if c.is_top():
            continue
        d = c.d(act)
        parts.append(d if d is not None else BOT)
    return simplify(conj(parts))


def spcon_cover(spec: SpconSpec, clause: Clause) -> list[tuple]:
    """Cover of the special conjunction at a clause.

    The top vector when the clause is top or the literals already imply
    it syntactically; otherwise ``c_{a,y}`` (``d_a`` at ``y``, top
    elsewhere) and ``c_{a,e}`` (``d_a | e`` across the ``a`` block, top on
    other blocks) for every action of the special conjunction.
    """
    coords = spec.coords()
    top_vec = tuple(TOP for _ in coords)
    lits = set(spec.literals)
    if clause.is_top() or spec.is_inconsistent() or lits & clause.literals:
        return [top_vec]
    out = []
    for act, xs in spec.blocks:
        d = clause.d(act)
        d = d if d is not None else BOT
        for y in xs:
            out.append(tuple(d if c == (act, y) else TOP for c in coords))
        for e in sorted(clause.E(act), key=str):
            de = simplify(Or(d, e))
            out.append(tuple(de if c[0] == act else TOP for c in coords))
    return out


# -- cover graphs and fixed points ---------------------------------------------------

@dataclass
class CoverGraph:
    vertices: list
    edges: list            # (source index, label vector, target index)
    closed: bool
    nx: int

    def out_edges(self, v: int):
        return [(lab, w) for s, lab, w in self.edges if s == v]


def cover_graph(d: Descriptor, l, be, nx: int = 1, budget: int = 4096) -> CoverGraph:
    """Breadth-first exploration of ``l --m'--> l'`` for ``(l', m')`` in the
    cover of ``d`` at ``l``."""
    root = tuple(l) if isinstance(l, (tuple, list)) else (l,)
    keys = {tuple(be.key(c) for c in root): 0}
    verts = [root]
    edges = []
    queue = deque([0])
    closed = True
    while queue:
        v = queue.popleft()
        for c in cover(d, verts[v], be, budget):
            tgt, lab = tuple(c[:nx]), tuple(c[nx:])
            k = tuple(be.key(x) for x in tgt)
            if k not in keys:
                if len(verts) >= budget:
                    closed = False
                    continue
                keys[k] = len(verts)
                verts.append(tgt)
                queue.append(keys[k])
            edges.append((v, lab, keys[k]))
    return CoverGraph(verts, edges, closed, nx)


def pans(graph: CoverGraph, be, limit: int = 200_000) -> list[tuple]:
    """Label meets of every simple path from the root followed by a simple
    cycle, by depth-first search with on-path marking."""
    out = {}
    count = [0]
    adj = {v: graph.out_edges(v) for v in range(len(graph.vertices))}
    on_path = {0: 0}
    labels: list[tuple] = []

    def rec(v):
        for lab, w in adj[v]:
            count[0] += 1
            if count[0] > limit:
                raise RuntimeError("pan enumeration limit exceeded")
            if w in on_path:
                meet = _meet_vectors(be, labels + [lab], len(lab))
                out.setdefault(tuple(be.key(c) for c in meet), meet)
            else:
                on_path[w] = len(labels) + 1
                labels.append(lab)
                rec(w)
                labels.pop()
                del on_path[w]

    rec(0)
    return list(out.values())


def lasso_meets(graph: CoverGraph, be) -> list[tuple]:
    """Maximal label meets over walks from the root into a closed walk.

    Same maximal elements as the pans, computed over the finite state space
    of (vertex, running meet) pairs instead of enumerating simple paths.
    """
    nv = len(graph.vertices)
    adj = {v: graph.out_edges(v) for v in range(nv)}
    ny = None
    for _, lab, _ in graph.edges:
        ny = len(lab)
        break
    if ny is None:
        return []
    top = tuple(be.top for _ in range(ny))

    def reach(start, first_step: bool):
        seen = set()
        work = []
        if first_step:
            for lab, w in adj[start]:
                work.append((w, lab))
        else:
            work.append((start, top))
        while work:
            v, mu = work.pop()
            if (v, mu) in seen:
                continue
            seen.add((v, mu))
            for lab, w in adj[v]:
                work.append((w, tuple(be.meet(a, b) for a, b in zip(mu, lab))))
        return seen

    paths = reach(0, False)
    at: dict[int, set] = {}
    for v, mu in paths:
        at.setdefault(v, set()).add(mu)
    out = []
    for u, mus in at.items():
        loops = {mu for v, mu in reach(u, True) if v == u}
        if not loops:
            continue
        pm = be.prune(list(mus))
        lm = be.prune(list(loops))
        out.extend(tuple(be.meet(a, b) for a, b in zip(p, c)) for p in pm for c in lm)
    return be.prune(out)


class NotFiniteType(RuntimeError):
    pass


def mu_cover(inner: Descriptor, l, be, nx: int = 1, budget: int = 4096,
             method: str | None = None) -> list[tuple]:
    """Cover of ``y -> mu x. inner(x, y)`` at ``l``: the label meets of the
    pans of the cover graph rooted at ``l``."""
    g = cover_graph(inner, l, be, nx, budget)
    if not g.closed:
        raise NotFiniteType("cover graph did not close within the budget")
    method = method or ("lasso" if be.exact else "pans")
    meets = lasso_meets(g, be) if method == "lasso" else pans(g, be)
    return be.prune(meets)


# -- reachability for families of schemes ------------------------------------------

@dataclass
class ReachResult:
    reach: list
    closed: bool


def automaton_reach(schemes: Sequence[Descriptor], seeds: Iterable, be, budget: int = 512) -> ReachResult:
    """Least set containing ``seeds`` and every coordinate of every cover,
    at a member, of a scalar-valued scheme."""
    out = []
    keys = set()
    work = deque()
    for s in seeds:
        k = be.key(s)
        if k not in keys:
            keys.add(k)
            out.append(s)
            work.append(s)
    closed = True
    while work:
        q = work.popleft()
        for d in schemes:
            for c in cover(d, q, be):
                for x in c:
                    k = be.key(x)
                    if k in keys:
                        continue
                    if len(out) >= budget:
                        closed = False
                        continue
                    keys.add(k)
                    out.append(x)
                    work.append(x)
    return ReachResult(out, closed)


# -- constructiveness ------------------------------------------------------------------

@dataclass
class SupResult:
    value: tuple
    trace: list
    bound_ok: bool
    checked: int = 0
    failures: list = field(default_factory=list)


def constructive_sup(inner: Descriptor, m, be: FiniteBackend, nx: int = 1,
                     budget: int = 4096, roots: Iterable | None = None) -> SupResult:
    """Approximants of ``x -> inner(x, m)`` together with the pigeonhole
    bound: whenever the ``k``-th approximant is below ``l``, with ``k`` the
    vertex count of the cover graph at ``l``, the fixed point is below ``l``."""
    m = tuple(m) if isinstance(m, (tuple, list)) else (m,)
    bots = tuple(be.bot for _ in range(nx))
    trace = iterate(lambda x: apply(inner, x + m, be), bots)
    value = trace[-1]
    if roots is None:
        elems = list(be.elements())
        roots = list(product(elems, repeat=nx)) if len(elems) ** nx <= 256 else [value]
    failures = []
    checked = 0
    for l in roots:
        l = tuple(l)
        g = cover_graph(inner, l, be, nx, budget)
        if not g.closed:
            raise NotFiniteType("cover graph did not close within the budget")
        k = len(g.vertices)
        approx = bots
        for _ in range(k):
            approx = apply(inner, approx + m, be)
        checked += 1
        if be.vec_leq(approx, l) and not be.vec_leq(value, l):
            failures.append(l)
    return SupResult(value, trace, not failures, checked, failures)


@dataclass
class StarIteration:
    terms: list
    steps: int
    stabilized: bool
    fl_size: int

    @property
    def within_bound(self) -> bool:
        return self.stabilized and self.steps <= self.fl_size


def star_adjoint_iteration(act: str, b: Term, limit: int = 200) -> StarIteration:
    """Iterate ``c -> <act>^-1(c)`` from ``b`` until a repetition up to the
    canonical normal key; the meet of the iterates is the largest ``x``
    with ``<act>* x <= b``."""
    seen = {}
    terms = []
    cur = nnf(b)
    for step in range(limit + 1):
        k = normal_key(cur)
        if k in seen:
            # b itself is stage zero; count the applications that gave new terms
            return StarIteration(terms, step - 1, True, len(fl_closure(nnf(b))))
        seen[k] = step
        terms.append(cur)
        cur = dia_right_adjoint(act, modal_cnf(cur))
    return StarIteration(terms, limit, False, len(fl_closure(nnf(b))))


def star_meet(it: StarIteration) -> Term:
    return simplify(conj(it.terms))


def format_covers(vecs: Iterable[tuple], show=str) -> str:
    """One vector per line, tab separated, in coordinate order."""
    return "\n".join("\t".join(show(c) for c in v) for v in vecs)


class NoCoverRule(ValueError):
    pass


def descriptor_from_term(t: Term, coords: Sequence[str], const=lambda k: k) -> Descriptor:
    """Read a term in the variables ``coords`` as a descriptor.

    Accepted shapes: a coordinate, a term without coordinates (constant),
    joins, diamonds, a constant meet ``k & s``, special conjunctions
    (literals and at most one arrow per action) and least fixed points.
    ``const`` maps constant terms into the backend.
    """
    coords = tuple(coords)

    def rec(u: Term, cs: tuple) -> Descriptor:
        k = len(cs)
        if not (free_vars(u) & set(cs)):
            return Const(const(u), k)
        if isinstance(u, Var):
            return Proj(cs.index(u.name), k)
        if isinstance(u, Or):
            return compose(Join(2), rec(u.left, cs), rec(u.right, cs))
        if isinstance(u, Dia):
            return compose(DiaOp(u.act), rec(u.body, cs))
        if isinstance(u, Mu):
            return ParamMu(rec(u.body, (u.var,) + cs))
        if isinstance(u, (And, Arrow)):
            parts = _flatten_and(u)
            fixed = [p for p in parts if not (free_vars(p) & set(cs))]
            moving = [p for p in parts if free_vars(p) & set(cs)]
            if all(isinstance(p, Arrow) for p in moving) and len({p.act for p in moving}) == len(moving) \
                    and all(_is_lit(p) for p in fixed):
                blocks, args, i = {}, [], 0
                for p in moving:
                    blocks[p.act] = [f"_c{i + j}" for j in range(len(p.bodies))]
                    i += len(p.bodies)
                    args.extend(p.bodies)
                spec = SpconSpec.make(fixed, blocks)
                if not args:
                    return Const(const(u), k)
                return compose(SpconOp(spec), *[rec(b, cs) for b in args])
            if len(moving) == 1:
                return compose(ConstMeet(const(conj(fixed))), rec(moving[0], cs))
        raise NoCoverRule(f"no cover rule for {u}")

    return rec(t, coords)


def _flatten_and(t: Term) -> list:
    if isinstance(t, And):
        return _flatten_and(t.left) + _flatten_and(t.right)
    return [t]


def _is_lit(t: Term) -> bool:
    return is_literal(t)
