"""Dedekind-MacNeille completion of finite posets and extension of
join-preserving maps (and modal operators) to the completion."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from .algebra import EvalError, evaluate, iterate
from .kripke import KripkeModel
from .terms import Term, free_vars


class PosetError(ValueError):
    pass


class Undefined(EvalError):
    """A join, meet or constant that the poset does not have."""


class FinitePoset:
    def __init__(self, elements: Sequence[Hashable], leq: Iterable[tuple] = (), check: bool = True):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise PosetError("duplicate elements")
        self.index = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        rel = [[i == j for j in range(n)] for i in range(n)]
        for a, b in leq:
            if a not in self.index or b not in self.index:
                raise PosetError(f"unknown element in {a!r} <= {b!r}")
            rel[self.index[a]][self.index[b]] = True
        self.rel = rel
        # down[i] / up[i] as bitmasks over indices
        self.down = [sum(1 << j for j in range(n) if rel[j][i]) for i in range(n)]
        self.up = [sum(1 << j for j in range(n) if rel[i][j]) for i in range(n)]
        if check:
            self._validate()

    @classmethod
    def from_relation(cls, elements: Sequence, pairs: Iterable[tuple]) -> "FinitePoset":
        """Reflexive-transitive closure of ``pairs``."""
        g = nx.DiGraph()
        g.add_nodes_from(elements)
        g.add_edges_from(pairs)
        tc = nx.transitive_closure_dag(g) if nx.is_directed_acyclic_graph(g) else None
        if tc is None:
            raise PosetError("relation has a cycle")
        return cls(elements, tc.edges())

    def _validate(self) -> None:
        n = len(self.elements)
        r = self.rel
        for i in range(n):
            for j in range(n):
                if i != j and r[i][j] and r[j][i]:
                    raise PosetError(f"not antisymmetric: {self.elements[i]!r}, {self.elements[j]!r}")
        for i in range(n):
            for j in range(n):
                if r[i][j] and (self.up[j] & ~self.up[i]):
                    raise PosetError("not transitive")

    def __len__(self):
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << len(self.elements)) - 1

    def le(self, a, b) -> bool:
        return self.rel[self.index[a]][self.index[b]]

    def lower_bounds(self, mask: int) -> int:
        out = self.full
        for i in _bits(mask):
            out &= self.down[i]
        return out

    def upper_bounds(self, mask: int) -> int:
        out = self.full
        for i in _bits(mask):
            out &= self.up[i]
        return out

    def _least(self, mask: int):
        for i in _bits(mask):
            if mask & ~self.up[i] == 0:
                return i
        return None

    def _greatest(self, mask: int):
        for i in _bits(mask):
            if mask & ~self.down[i] == 0:
                return i
        return None

    def join_of(self, xs: Iterable):
        """Least upper bound of ``xs`` or None."""
        mask = self.mask(xs)
        i = self._least(self.upper_bounds(mask))
        return None if i is None else self.elements[i]

    def meet_of(self, xs: Iterable):
        mask = self.mask(xs)
        i = self._greatest(self.lower_bounds(mask))
        return None if i is None else self.elements[i]

    def mask(self, xs: Iterable) -> int:
        out = 0
        for x in xs:
            out |= 1 << self.index[x]
        return out

    def members(self, mask: int) -> list:
        return [self.elements[i] for i in _bits(mask)]

    def is_lattice(self) -> bool:
        if not self.elements:
            return False
        for a in self.elements:
            for b in self.elements:
                if self.join_of((a, b)) is None or self.meet_of((a, b)) is None:
                    return False
        return self.join_of(()) is not None and self.meet_of(()) is not None

    def hasse(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self)))
        n = len(self)
        for i in range(n):
            for j in range(n):
                if i != j and self.rel[i][j]:
                    between = self.up[i] & self.down[j] & ~(1 << i) & ~(1 << j)
                    if not between:
                        g.add_edge(i, j)
        return g

    def __repr__(self):
        return f"FinitePoset({list(self.elements)!r})"


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


# -- the cut lattice ----------------------------------------------------------

class CutLattice:
    """Cuts of a finite poset, each stored as its lower set (a bitmask)."""

    def __init__(self, poset: FinitePoset, cuts: Iterable[int]):
        self.poset = poset
        self.cuts = sorted(set(cuts), key=lambda c: (bin(c).count("1"), c))
        self._pos = {c: i for i, c in enumerate(self.cuts)}
        self.top = poset.full
        self.bot = poset.lower_bounds(poset.full)

    def __len__(self):
        return len(self.cuts)

    def __contains__(self, c):
        return c in self._pos

    def close(self, mask: int) -> int:
        p = self.poset
        return p.lower_bounds(p.upper_bounds(mask))

    def upper(self, cut: int) -> int:
        return self.poset.upper_bounds(cut)

    def iota(self, x) -> int:
        return self.poset.down[self.poset.index[x]]

    def leq(self, a: int, b: int) -> bool:
        return a & ~b == 0

    def meet(self, a: int, b: int) -> int:
        return a & b

    def join(self, a: int, b: int) -> int:
        return self.close(a | b)

    def join_all(self, cs: Iterable[int]) -> int:
        acc = 0
        for c in cs:
            acc |= c
        return self.close(acc)

    def meet_all(self, cs: Iterable[int]) -> int:
        acc = self.top
        for c in cs:
            acc &= c
        return acc

    def elements(self) -> list[int]:
        return list(self.cuts)

    def as_poset(self) -> FinitePoset:
        return FinitePoset(self.cuts, [(a, b) for a in self.cuts for b in self.cuts if self.leq(a, b)],
                           check=False)

    def order_matrix(self) -> list[list[int]]:
        return [[int(self.leq(a, b)) for b in self.cuts] for a in self.cuts]

    def label(self, cut: int) -> str:
        return "{" + ",".join(str(x) for x in self.poset.members(cut)) + "}"


def dm_completion(p: FinitePoset, max_elements: int = 24) -> CutLattice:
    """Cuts as the intersections of principal down-sets (the empty
    intersection being the whole carrier)."""
    if len(p) > max_elements:
        raise PosetError(f"poset has more than {max_elements} elements")
    cuts = {p.full}
    frontier = [p.full]
    gens = set(p.down)
    cuts |= gens
    frontier = list(cuts)
    while frontier:
        new = []
        for c in frontier:
            for g in gens:
                k = c & g
                if k not in cuts:
                    cuts.add(k)
                    new.append(k)
        frontier = new
    return CutLattice(p, cuts)


def dm_completion_oracle(p: FinitePoset) -> CutLattice:
    """Every subset ``A`` with ``A = L(U(A))``, by enumeration."""
    cuts = [a for a in range(p.full + 1) if p.lower_bounds(p.upper_bounds(a)) == a]
    return CutLattice(p, cuts)


@dataclass
class CompletionReport:
    complete: bool
    embedding: bool
    join_dense: bool
    meet_dense: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.complete and self.embedding and self.join_dense and self.meet_dense


def check_completion(c: CutLattice) -> CompletionReport:
    p = c.poset
    fails = []
    cut_set = set(c.cuts)
    # every subset of cuts has a meet and join inside the cut set
    complete = all(a & b in cut_set and c.join(a, b) in cut_set for a in c.cuts for b in c.cuts)
    complete = complete and c.top in cut_set and c.bot in cut_set
    for a in c.cuts:
        if c.close(a) != a:
            complete = False
            fails.append(("not closed", a))
    embedding = True
    for x in p.elements:
        for y in p.elements:
            if p.le(x, y) != c.leq(c.iota(x), c.iota(y)):
                embedding = False
                fails.append(("order", x, y))
    img = {c.iota(x) for x in p.elements}
    join_dense = all(c.join_all(i for i in img if c.leq(i, a)) == a for a in c.cuts)
    meet_dense = all(c.meet_all(i for i in img if c.leq(a, i)) == a for a in c.cuts)
    return CompletionReport(complete, embedding, join_dense, meet_dense, fails)


# -- isomorphism -------------------------------------------------------------

def _profile(p: FinitePoset) -> tuple:
    n = len(p)
    ups = sorted(bin(p.up[i]).count("1") for i in range(n))
    downs = sorted(bin(p.down[i]).count("1") for i in range(n))
    pairs = sorted((bin(p.up[i]).count("1"), bin(p.down[i]).count("1")) for i in range(n))
    return n, tuple(ups), tuple(downs), tuple(pairs)


def _order_graph(p: FinitePoset) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(len(p)))
    g.add_edges_from((i, j) for i in range(len(p)) for j in range(len(p)) if i != j and p.rel[i][j])
    return g


def isomorphic(p: FinitePoset, q: FinitePoset) -> bool:
    if _profile(p) != _profile(q):
        return False
    return DiGraphMatcher(_order_graph(p), _order_graph(q)).is_isomorphic()


def isomorphic_bruteforce(p: FinitePoset, q: FinitePoset) -> bool:
    n = len(p)
    if n != len(q):
        return False
    for perm in itertools.permutations(range(n)):
        if all(p.rel[i][j] == q.rel[perm[i]][perm[j]] for i in range(n) for j in range(n)):
            return True
    return False


def posets_up_to_iso(n: int) -> list[FinitePoset]:
    """All posets on ``n`` points up to isomorphism.  Every poset has a
    linear extension, so relations within the strict upper triangle that
    are transitive cover all of them."""
    cells = [(i, j) for i in range(n) for j in range(i + 1, n)]
    found: dict[tuple, list[FinitePoset]] = {}
    for bits in range(1 << len(cells)):
        rel = {cells[k] for k in range(len(cells)) if bits >> k & 1}
        if any((i, k) not in rel for (i, j) in rel for (j2, k) in rel if j == j2):
            continue
        p = FinitePoset(range(n), rel, check=False)
        bucket = found.setdefault(_profile(p), [])
        if not any(isomorphic(p, q) for q in bucket):
            bucket.append(p)
    return [p for b in found.values() for p in b]


def random_poset(rng: random.Random, max_elements: int = 8, density: float = 0.3) -> FinitePoset:
    n = rng.randint(0, max_elements)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    perm = list(range(n))
    rng.shuffle(perm)
    return FinitePoset.from_relation(perm, [(perm[i], perm[j]) for i, j in pairs])


# -- extending join-preserving maps ----------------------------------------------

class NotJoinPreserving(ValueError):
    pass


@dataclass
class ExtendedAdjoint:
    lattice: CutLattice
    base: dict
    ext: dict            # cut -> cut
    right: dict          # cut -> cut

    def f(self, cut: int) -> int:
        return self.ext[cut]

    def g(self, cut: int) -> int:
        return self.right[cut]


def preserves_joins(p: FinitePoset, f: Mapping, exhaustive_limit: int = 12) -> list:
    """Subsets ``S`` whose completion join is not respected: some ``x``
    below every upper bound of ``S`` has ``f(x)`` escaping the upper
    bounds of ``f(S)``.  On a lattice this is plain join preservation, and
    pairs plus the empty set suffice."""
    if p.is_lattice():
        subsets = [()] + [(a, b) for a in p.elements for b in p.elements]
    else:
        if len(p) > exhaustive_limit:
            raise PosetError("poset too large for the exhaustive join check")
        subsets = [p.members(m) for m in range(p.full + 1)]
    bad = []
    for s in subsets:
        below = p.lower_bounds(p.upper_bounds(p.mask(s)))
        target = p.lower_bounds(p.upper_bounds(p.mask(f[x] for x in s)))
        if any(not target >> p.index[f[x]] & 1 for x in p.members(below)):
            bad.append(tuple(s))
    return bad


def extend_left_adjoint(p: FinitePoset, f: Mapping, c: CutLattice | None = None) -> ExtendedAdjoint:
    """``f`` on the cuts by join-density, ``A -> join of iota f(a)``, with
    right adjoint ``B -> {x : f(x) in B}``."""
    c = c or dm_completion(p)
    f = {x: f[x] for x in p.elements}
    bad = preserves_joins(p, f)
    if bad:
        raise NotJoinPreserving(f"existing join of {bad[0]!r} not preserved")
    ext = {a: c.join_all(c.iota(f[x]) for x in p.members(a)) for a in c.cuts}
    right = {}
    for b in c.cuts:
        pre = p.mask(x for x in p.elements if c.iota(f[x]) & ~b == 0)
        right[b] = c.close(pre)
    return ExtendedAdjoint(c, f, ext, right)


@dataclass
class AdjointReport:
    extends: bool
    adjunction: bool
    joins: bool
    meets: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.extends and self.adjunction and self.joins and self.meets


def check_adjoint(e: ExtendedAdjoint) -> AdjointReport:
    c = e.lattice
    p = c.poset
    fails = []
    extends = all(e.f(c.iota(x)) == c.iota(e.base[x]) for x in p.elements)
    adj = True
    for a in c.cuts:
        for b in c.cuts:
            if c.leq(e.f(a), b) != c.leq(a, e.g(b)):
                adj = False
                fails.append((a, b))
    joins = e.f(c.bot) == c.bot and all(
        e.f(c.join(a, b)) == c.join(e.f(a), e.f(b)) for a in c.cuts for b in c.cuts)
    meets = e.g(c.top) == c.top and all(
        e.g(a & b) == e.g(a) & e.g(b) for a in c.cuts for b in c.cuts)
    return AdjointReport(extends, adj, joins, meets, fails)


def right_adjoint_oracle(c: CutLattice, fext: Mapping[int, int], b: int) -> int:
    """Largest cut ``a`` with ``f(a) <= b``, by search."""
    best = [a for a in c.cuts if c.leq(fext[a], b)]
    top = c.join_all(best)
    return top


# -- modal structure ------------------------------------------------------------------

class PosetAlgebra:
    """A finite poset with monotone diamonds and named constants.  Lattice
    operations are partial: a missing join or meet raises ``Undefined``."""

    def __init__(self, poset: FinitePoset, dias: Mapping[str, Mapping] | None = None,
                 gens: Mapping[str, Hashable] | None = None, neg: Mapping | None = None):
        self.poset = poset
        self.dias = {a: dict(m) for a, m in (dias or {}).items()}
        self.gens = dict(gens or {})
        self._neg = dict(neg) if neg is not None else None

    @classmethod
    def from_model(cls, m: KripkeModel) -> "PosetAlgebra":
        els = list(m.elements())
        p = FinitePoset(els, [(a, b) for a in els for b in els if a & ~b == 0], check=False)
        dias = {act: {x: m.dia(act, x) for x in els} for act in m.actions}
        gens = {g: m.gen(g) for g in m.valuation}
        return cls(p, dias, gens, {x: m.neg(x) for x in els})

    def _need(self, v, what):
        if v is None:
            raise Undefined(f"{what} does not exist")
        return v

    @property
    def top(self):
        return self._need(self.poset.meet_of(()), "top")

    @property
    def bot(self):
        return self._need(self.poset.join_of(()), "bottom")

    def meet(self, a, b):
        return self._need(self.poset.meet_of((a, b)), f"meet of {a!r}, {b!r}")

    def join(self, a, b):
        return self._need(self.poset.join_of((a, b)), f"join of {a!r}, {b!r}")

    def leq(self, a, b):
        return self.poset.le(a, b)

    def gen(self, name):
        if name not in self.gens:
            raise Undefined(f"no constant {name!r}")
        return self.gens[name]

    def dia(self, act, a):
        return self.dias[act][a]

    def neg(self, a):
        if self._neg is None:
            raise Undefined("no negation")
        return self._neg[a]

    def box(self, act, a):
        return self.neg(self.dia(act, self.neg(a)))

    def literal(self, name, positive):
        g = self.gen(name)
        return g if positive else self.neg(g)


class CutModalAlgebra:
    """The cut lattice with every diamond extended; negation is the
    pseudocomplement (a complement when the completion is Boolean)."""

    def __init__(self, base: PosetAlgebra, c: CutLattice | None = None):
        self.base = base
        self.cuts = c or dm_completion(base.poset)
        self.ext = {a: extend_left_adjoint(base.poset, d, self.cuts) for a, d in base.dias.items()}
        self.top = self.cuts.top
        self.bot = self.cuts.bot

    def iota(self, x):
        return self.cuts.iota(x)

    def meet(self, a, b):
        return a & b

    def join(self, a, b):
        return self.cuts.join(a, b)

    def leq(self, a, b):
        return a & ~b == 0

    def gen(self, name):
        return self.iota(self.base.gen(name))

    def dia(self, act, a):
        return self.ext[act].f(a)

    def neg(self, a):
        return self.cuts.join_all(b for b in self.cuts.cuts if a & b == self.bot)

    def box(self, act, a):
        return self.neg(self.dia(act, self.neg(a)))

    def literal(self, name, positive):
        g = self.gen(name)
        return g if positive else self.neg(g)

    def elements(self):
        return self.cuts.elements()


def complete_modal_structure(base: PosetAlgebra, c: CutLattice | None = None) -> CutModalAlgebra:
    return CutModalAlgebra(base, c)


@dataclass
class ModalReport:
    morphism: bool
    normal: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.morphism and self.normal


def check_modal_structure(cm: CutModalAlgebra) -> ModalReport:
    p = cm.base.poset
    fails = []
    morph = True
    for act in cm.base.dias:
        for x in p.elements:
            if cm.dia(act, cm.iota(x)) != cm.iota(cm.base.dia(act, x)):
                morph = False
                fails.append((act, x))
    normal = True
    for act in cm.base.dias:
        if cm.dia(act, cm.bot) != cm.bot:
            normal = False
        for a in cm.cuts.cuts:
            for b in cm.cuts.cuts:
                if cm.dia(act, cm.join(a, b)) != cm.join(cm.dia(act, a), cm.dia(act, b)):
                    normal = False
                    fails.append((act, a, b))
    return ModalReport(morph, normal, fails)


# -- preservation of least fixed points ---------------------------------------------------

PRESERVED = "preserved"
HYPOTHESIS_FAILURE = "hypothesis_failure"
NOT_PRESERVED = "not_preserved"


@dataclass
class PreservationReport:
    verdict: str
    stages: int = 0
    witness: object = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict == PRESERVED


def preservation_check(base: PosetAlgebra, cm: CutModalAlgebra, body: Term, var: str,
                       env: Mapping | None = None) -> PreservationReport:
    """Compare the least fixed point of ``body`` in ``base`` with the one in
    the completion, stage by stage.  The hypotheses (body defined on the
    base and commuting with the embedding) are checked first."""
    env = dict(env or {})
    cenv = {k: cm.iota(v) for k, v in env.items()}
    extra = free_vars(body) - {var} - set(env)
    if extra:
        raise EvalError(f"unbound variables {sorted(extra)}")
    for x in base.poset.elements:
        try:
            v = evaluate(base, body, {**env, var: x})
        except Undefined as err:
            return PreservationReport(HYPOTHESIS_FAILURE, witness=x, detail=str(err))
        if cm.iota(v) != evaluate(cm, body, {**cenv, var: cm.iota(x)}):
            return PreservationReport(HYPOTHESIS_FAILURE, witness=x,
                                      detail="polynomial does not commute with the embedding")
    try:
        start = base.bot
    except Undefined as err:
        return PreservationReport(HYPOTHESIS_FAILURE, detail=str(err))
    lo = iterate(lambda x: evaluate(base, body, {**env, var: x}), start)
    hi = iterate(lambda x: evaluate(cm, body, {**cenv, var: x}), cm.bot)
    n = max(len(lo), len(hi))
    for k in range(n):
        a = cm.iota(lo[min(k, len(lo) - 1)])
        b = hi[min(k, len(hi) - 1)]
        if a != b:
            return PreservationReport(NOT_PRESERVED, stages=k, witness=k,
                                      detail="approximants differ")
    return PreservationReport(PRESERVED, stages=len(lo) - 1)


def term_preserved(base: PosetAlgebra, cm: CutModalAlgebra, t: Term) -> bool:
    """Closed term evaluated in the base and in the completion agree through
    the embedding."""
    return cm.iota(evaluate(base, t)) == evaluate(cm, t)


def dump_completion(c: CutLattice) -> str:
    lines = ["\t".join(["cut"] + [c.label(b) for b in c.cuts])]
    for a, row in zip(c.cuts, c.order_matrix()):
        lines.append("\t".join([c.label(a)] + [str(v) for v in row]))
    return "\n".join(lines)
