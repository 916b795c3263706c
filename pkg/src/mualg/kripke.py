"""Powerset algebras of finite Kripke models.

Elements are Python ints used as bitsets over the state list.  A relation
is stored as a list of ``(offset, mask)`` pairs: bit ``i`` of the mask for
offset ``d`` says that state ``i`` has a successor ``i + d``.  The
diamond of ``z`` is then ``OR_d (z >> d) & mask_d``, which stays cheap even
for the disjoint union of every small model at once.
"""
from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .algebra import EvalError, evaluate, iterate
from .terms import (
    And, Box, Dia, Gen, Not, Term, actions, conj, disj,
    free_vars, generators,
)


def _shift(z: int, d: int) -> int:
    return z >> d if d >= 0 else z << -d


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


class KripkeModel:
    """A finite Kripke model seen as a Boolean algebra with operators."""

    def __init__(self, states: Iterable[str], relations: Mapping[str, Iterable] | None = None,
                 valuation: Mapping[str, Iterable[str]] | None = None,
                 actions: Iterable[str] | None = None):
        self.states = tuple(states)
        index = {s: i for i, s in enumerate(self.states)}
        if len(index) != len(self.states):
            raise ValueError("duplicate state name")
        relations = dict(relations or {})
        acts = set(actions) if actions is not None else set(relations)
        for a in relations:
            if a not in acts:
                raise ValueError(f"undeclared action {a!r}")
        edges: dict[str, list[tuple[int, int]]] = {}
        for a in sorted(acts):
            pairs = []
            for s, t in relations.get(a, ()):
                if s not in index or t not in index:
                    raise ValueError(f"unknown state in edge {s}->{t}")
                pairs.append((index[s], index[t]))
            edges[a] = pairs
        val = {}
        for g, ss in (valuation or {}).items():
            mask = 0
            for s in ss:
                if s not in index:
                    raise ValueError(f"unknown state {s!r} in valuation of {g!r}")
                mask |= 1 << index[s]
            val[g] = mask
        self._init(len(self.states), self._offsets_from_edges(edges), val)

    @staticmethod
    def _offsets_from_edges(edges: Mapping[str, Iterable[tuple[int, int]]]) -> dict:
        out = {}
        for a, pairs in edges.items():
            by_d: dict[int, int] = {}
            for i, j in pairs:
                by_d[j - i] = by_d.get(j - i, 0) | (1 << i)
            out[a] = sorted(by_d.items())
        return out

    def _init(self, n: int, offsets: dict, valuation: dict) -> None:
        self.n = n
        self.top = (1 << n) - 1
        self.bot = 0
        self.actions = tuple(sorted(offsets))
        self._off = offsets
        self.valuation = dict(valuation)

    @classmethod
    def from_edges(cls, n: int, edges: Mapping[str, Iterable[tuple[int, int]]],
                   valuation: Mapping[str, int], names: Iterable[str] | None = None) -> "KripkeModel":
        m = cls.__new__(cls)
        m.states = tuple(names) if names is not None else tuple(f"s{i}" for i in range(n))
        m._init(n, cls._offsets_from_edges(edges), valuation)
        return m

    @classmethod
    def _from_offsets(cls, n: int, offsets: dict, valuation: dict) -> "KripkeModel":
        m = cls.__new__(cls)
        m.states = None
        m._init(n, offsets, valuation)
        return m

    # -- algebra interface ---------------------------------------------
    def meet(self, a: int, b: int) -> int:
        return a & b

    def join(self, a: int, b: int) -> int:
        return a | b

    def neg(self, a: int) -> int:
        return self.top ^ a

    def leq(self, a: int, b: int) -> bool:
        return a & ~b == 0

    def gen(self, name: str) -> int:
        return self.valuation.get(name, 0)

    def literal(self, name: str, positive: bool) -> int:
        v = self.gen(name)
        return v if positive else self.top ^ v

    def _offsets(self, act: str):
        try:
            return self._off[act]
        except KeyError:
            raise EvalError(f"unknown action {act!r}") from None

    def dia(self, act: str, z: int) -> int:
        out = 0
        for d, mask in self._offsets(act):
            out |= _shift(z, d) & mask
        return out

    def box(self, act: str, z: int) -> int:
        return self.top ^ self.dia(act, self.top ^ z)

    def converse_dia(self, act: str, z: int) -> int:
        """States with some ``act``-predecessor in ``z``."""
        out = 0
        for d, mask in self._offsets(act):
            out |= _shift(z & mask, -d)
        return out

    def dia_adjoint(self, act: str, m: int) -> int:
        """Largest ``z`` with ``dia(act, z) <= m``."""
        return self.top ^ self.converse_dia(act, self.top ^ m)

    # -- structure -------------------------------------------------------
    def successors(self, act: str, i: int) -> int:
        out = 0
        for d, mask in self._offsets(act):
            if mask >> i & 1:
                out |= 1 << (i + d)
        return out

    def edges(self, act: str) -> list[tuple[int, int]]:
        out = []
        for d, mask in self._offsets(act):
            out.extend((i, i + d) for i in _bits(mask))
        return sorted(out)

    def state_names(self) -> tuple[str, ...]:
        return self.states if self.states is not None else tuple(f"s{i}" for i in range(self.n))

    def elem(self, names: Iterable[str]) -> int:
        index = {s: i for i, s in enumerate(self.state_names())}
        mask = 0
        for s in names:
            mask |= 1 << index[s]
        return mask

    def names(self, mask: int) -> frozenset[str]:
        st = self.state_names()
        return frozenset(st[i] for i in _bits(mask))

    def elements(self) -> range:
        return range(1 << self.n)

    def atoms(self) -> list[int]:
        return [1 << i for i in range(self.n)]

    def submodel(self, start: int, size: int) -> "KripkeModel":
        """The block of states ``start .. start+size-1``, assumed closed under edges."""
        edges = {}
        for a in self.actions:
            edges[a] = [(i - start, j - start) for i, j in self.edges_from(a, start, size)]
        val = {g: (v >> start) & ((1 << size) - 1) for g, v in self.valuation.items()}
        return KripkeModel.from_edges(size, edges, val)

    def edges_from(self, act: str, start: int, size: int) -> list[tuple[int, int]]:
        out = []
        window = ((1 << size) - 1) << start
        for d, mask in self._offsets(act):
            out.extend((i, i + d) for i in _bits(mask & window))
        return sorted(out)

    def with_valuation(self, valuation: Mapping[str, int]) -> "KripkeModel":
        m = KripkeModel._from_offsets(self.n, self._off, {**self.valuation, **valuation})
        m.states = self.states
        return m

    def signature(self) -> tuple:
        return (self.n, tuple((a, tuple(self._off[a])) for a in self.actions),
                tuple(sorted(self.valuation.items())))

    def __eq__(self, other):
        return isinstance(other, KripkeModel) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        return f"KripkeModel(n={self.n}, actions={self.actions}, gens={sorted(self.valuation)})"


def eval_term(m: KripkeModel, t: Term, env: Mapping[str, int] | None = None) -> int:
    return evaluate(m, t, env)


@dataclass
class ApproximantTrace:
    values: list
    stabilized_at: int = field(init=False)

    def __post_init__(self):
        self.stabilized_at = len(self.values) - 2

    @property
    def final(self):
        return self.values[-1]


def lfp_iterate(m, body: Term, var: str, env: Mapping | None = None) -> ApproximantTrace:
    """Approximants ``f^0(bot), f^1(bot), ...`` up to the first repetition."""
    env = dict(env or {})

    def step(x):
        env[var] = x
        return evaluate(m, body, env)

    return ApproximantTrace(iterate(step, m.bot))


def atoms(m: KripkeModel) -> list[int]:
    return m.atoms()


def char_hom(m: KripkeModel, y: int):
    """Two-valued Boolean morphism sending ``y`` to top: membership of the
    least state of ``y``."""
    if y == 0:
        raise ValueError("no two-valued morphism selects the bottom element")
    bit = y & -y
    return lambda z: bool(z & bit)


# -- sampling -------------------------------------------------------------

@dataclass(frozen=True)
class Sampler:
    exhaustive_states: int = 3
    exhaustive_cap: int = 1 << 18
    random_count: int = 100
    random_max_states: int = 8
    seed: int = 0


def random_model(seed: int, max_states: int = 4, actions: Iterable[str] = ("a",),
                 gens: Iterable[str] = ("p", "q"), min_states: int = 1,
                 density: float | None = None) -> KripkeModel:
    rng = random.Random(seed)
    return _random_model(rng, max_states, tuple(actions), tuple(gens), min_states, density)


def _random_model(rng: random.Random, max_states: int, acts: tuple, gens: tuple,
                  min_states: int = 1, density: float | None = None) -> KripkeModel:
    n = rng.randint(min_states, max_states)
    dens = density if density is not None else rng.choice((0.15, 0.3, 0.5))
    edges = {a: [(i, j) for i in range(n) for j in range(n) if rng.random() < dens] for a in acts}
    val = {}
    for g in gens:
        mask = 0
        for i in range(n):
            if rng.random() < 0.5:
                mask |= 1 << i
        val[g] = mask
    return KripkeModel.from_edges(n, edges, val)


class UnionModel:
    """Disjoint union of many small models, with a way back to each block."""

    def __init__(self, model: KripkeModel, starts: list[int], sizes: list[int]):
        self.model = model
        self.starts = starts
        self.sizes = sizes

    def __len__(self):
        return len(self.starts)

    def locate(self, state: int) -> tuple[KripkeModel, int]:
        k = bisect_right(self.starts, state) - 1
        start = self.starts[k]
        return self.model.submodel(start, self.sizes[k]), state - start


def _pack(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


@lru_cache(maxsize=32)
def exhaustive_union(acts: tuple, gens: tuple, max_states: int) -> UnionModel:
    """Every model with 1..max_states states over ``acts`` and ``gens``."""
    sizes_list: list[int] = []
    starts: list[int] = []
    counts = []
    total = 0
    for n in range(1, max_states + 1):
        c = 1 << (n * n * len(acts) + n * len(gens))
        counts.append((n, c, total))
        total += n * c
    masks = {a: {} for a in acts}
    val = {g: np.zeros(total, dtype=np.uint8) for g in gens}
    for n, c, base in counts:
        codes = np.arange(c, dtype=np.int64)
        nv = n * len(gens)
        rel = codes >> nv
        vcode = codes & ((1 << nv) - 1)
        for k, a in enumerate(acts):
            for i in range(n):
                for j in range(n):
                    bit = (rel >> (k * n * n + i * n + j)) & 1
                    d = j - i
                    arr = masks[a].get(d)
                    if arr is None:
                        arr = masks[a][d] = np.zeros(total, dtype=np.uint8)
                    arr[base + codes * n + i] |= bit.astype(np.uint8)
        for k, g in enumerate(gens):
            for i in range(n):
                bit = (vcode >> (k * n + i)) & 1
                val[g][base + codes * n + i] = bit.astype(np.uint8)
        starts.extend(range(base, base + n * c, n))
        sizes_list.extend([n] * c)
    offsets = {a: sorted((d, _pack(arr)) for d, arr in masks[a].items()) for a in acts}
    model = KripkeModel._from_offsets(total, offsets, {g: _pack(v) for g, v in val.items()})
    return UnionModel(model, starts, sizes_list)


def exhaustive_size(acts: int, gens: int, max_states: int) -> int:
    return sum(1 << (n * n * acts + n * gens) for n in range(1, max_states + 1))


def random_union(seed: int, count: int, max_states: int, acts: tuple, gens: tuple) -> UnionModel:
    rng = random.Random(seed)
    edges: dict[str, list] = {a: [] for a in acts}
    val = {g: 0 for g in gens}
    starts, sizes = [], []
    base = 0
    for _ in range(count):
        m = _random_model(rng, max_states, acts, gens)
        for a in acts:
            edges[a].extend((base + i, base + j) for i, j in m.edges(a))
        for g in gens:
            val[g] |= m.gen(g) << base
        starts.append(base)
        sizes.append(m.n)
        base += m.n
    model = KripkeModel.from_edges(base, edges, val)
    return UnionModel(model, starts, sizes)


def sample_unions(sampler: Sampler, acts: tuple, gens: tuple) -> list[UnionModel]:
    out = []
    k = sampler.exhaustive_states
    while k > 0 and exhaustive_size(len(acts), len(gens), k) > sampler.exhaustive_cap:
        k -= 1
    if k > 0:
        out.append(exhaustive_union(acts, gens, k))
    if sampler.random_count:
        out.append(random_union(sampler.seed, sampler.random_count, sampler.random_max_states, acts, gens))
    return out


@dataclass
class Refuted:
    model: KripkeModel
    state: int

    def __bool__(self):
        return False


@dataclass
class Unrefuted:
    samples: int

    def __bool__(self):
        return True


def term_signature(*terms: Term) -> tuple[tuple, tuple]:
    acts = set()
    gens = set()
    for t in terms:
        acts |= actions(t)
        gens |= generators(t) | free_vars(t)
    return tuple(sorted(acts)), tuple(sorted(gens))


def check_leq(lhs: Term, rhs: Term, sampler: Sampler | None = None,
              acts: Iterable[str] = (), gens: Iterable[str] = ()):
    """Search for a model and state where ``lhs`` holds and ``rhs`` fails.

    ``Unrefuted`` only means no counterexample was found at this bound.
    Free variables are valued like generators of the same name.
    """
    sampler = sampler or Sampler()
    a0, g0 = term_signature(lhs, rhs)
    acts = tuple(sorted(set(a0) | set(acts)))
    gens = tuple(sorted(set(g0) | set(gens)))
    tried = 0
    for u in sample_unions(sampler, acts, gens):
        m = u.model
        env = {v: m.gen(v) for v in gens}
        diff = evaluate(m, lhs, env) & ~evaluate(m, rhs, env)
        if diff:
            state = (diff & -diff).bit_length() - 1
            sub, local = u.locate(state)
            return Refuted(sub, local)
        tried += len(u)
    return Unrefuted(tried)


def check_eq(lhs: Term, rhs: Term, sampler: Sampler | None = None):
    v = check_leq(lhs, rhs, sampler)
    if not v:
        return v
    w = check_leq(rhs, lhs, sampler)
    if not w:
        return w
    return Unrefuted(v.samples)


# -- the product with the two-element algebra -----------------------------

class TwoProductAlgebra:
    """``A x 2`` with ``<a>(z, w) = (<a>z, chi_a(z))``."""

    def __init__(self, base: KripkeModel, chars: Mapping, gen_bits: Mapping[str, bool] | None = None):
        self.base = base
        self.chars = dict(chars)
        self.gen_bits = dict(gen_bits or {})
        self.top = (base.top, True)
        self.bot = (0, False)

    def chi(self, act: str, z: int) -> bool:
        c = self.chars.get(act)
        return bool(c(z)) if c is not None else False

    def meet(self, a, b):
        return (a[0] & b[0], a[1] and b[1])

    def join(self, a, b):
        return (a[0] | b[0], a[1] or b[1])

    def neg(self, a):
        return (self.base.top ^ a[0], not a[1])

    def leq(self, a, b):
        return self.base.leq(a[0], b[0]) and (not a[1] or b[1])

    def gen(self, name):
        return (self.base.gen(name), self.gen_bits.get(name, False))

    def literal(self, name, positive):
        g = self.gen(name)
        return g if positive else self.neg(g)

    def dia(self, act, a):
        return (self.base.dia(act, a[0]), self.chi(act, a[0]))

    def box(self, act, a):
        return self.neg(self.dia(act, self.neg(a)))

    def elements(self):
        for z in self.base.elements():
            yield (z, False)
            yield (z, True)


def _join_chars(chars):
    return lambda z: any(c(z) for c in chars)


def product_with_two(m: KripkeModel, ys: Mapping[str, Iterable[int]],
                     literals: Iterable[Term] = ()) -> TwoProductAlgebra:
    """Build ``A x 2`` from per-action non-bottom elements; generators get
    second coordinate top exactly when they occur positively in ``literals``."""
    chars = {}
    for act, elems in ys.items():
        elems = list(elems)
        if any(y == 0 for y in elems):
            raise ValueError(f"bottom element listed for action {act!r}")
        if elems:
            chars[act] = _join_chars([char_hom(m, y) for y in elems])
    bits = {}
    for lit in literals:
        if isinstance(lit, Gen):
            bits[lit.name] = True
        elif isinstance(lit, Not) and isinstance(lit.body, Gen):
            bits.setdefault(lit.body.name, False)
    return TwoProductAlgebra(m, chars, bits)


@dataclass
class WhitmanReport:
    kind: str
    detail: tuple = ()
    certificate: tuple | None = None

    def __str__(self):
        if self.kind == "certificate":
            return f"certificate second={self.certificate[1]}"
        return f"{self.kind} " + " ".join(str(d) for d in self.detail)


def whitman_check(literals: Iterable[Term], ys: Mapping[str, Iterable[Term]], m: KripkeModel,
                  xs: Mapping[str, Term] | None = None) -> WhitmanReport:
    """Either a literal clash, a bottom component, or the product certificate.

    With ``xs`` the per-action box arguments are ``xs[act]`` and a
    component is bottom when ``xs[act] & y`` evaluates to bottom.
    """
    lits = list(literals)
    lit_set = set(lits)
    for lit in lits:
        if isinstance(lit, Gen) and Not(lit) in lit_set:
            return WhitmanReport("literal_clash", (lit.name,))
    ys = {a: list(v) for a, v in ys.items()}
    vals = {}
    for act in sorted(ys):
        vals[act] = []
        for y in ys[act]:
            probe = And(xs[act], y) if xs and act in xs else y
            if eval_term(m, probe) == 0:
                return WhitmanReport("bottom_witness", (act, y))
            vals[act].append(eval_term(m, y))
    alg = product_with_two(m, vals, lits)
    parts = list(lits)
    for act in sorted(ys):
        box_arg = xs[act] if xs and act in xs else disj(ys[act])
        parts.append(Box(act, box_arg))
        parts.extend(Dia(act, y) for y in ys[act])
    cert = evaluate(alg, conj(parts))
    return WhitmanReport("certificate", certificate=cert)


# -- brute-force cover oracle ---------------------------------------------

def semantic_cover_oracle(f, m, carrier: Iterable, leq, limit: int = 1 << 12) -> list:
    """Maximal elements of ``{x in carrier : f(x) <= m}``."""
    xs = list(carrier)
    if len(xs) > limit:
        raise ValueError("carrier too large for the brute-force oracle")
    good = [x for x in xs if leq(f(x), m)]
    return maximal(good, leq)


def maximal(xs: Iterable, leq) -> list:
    xs = list(dict.fromkeys(xs))
    return [x for x in xs if not any(y != x and leq(x, y) for y in xs)]
