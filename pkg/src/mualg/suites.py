"""Named verification suites.  Each suite runs a batch of seeded checks
and returns one row per check; ``run_suite`` renders them as TSV."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import covers as cv
from .algebra import evaluate
from .completion import (
    HYPOTHESIS_FAILURE, PRESERVED, FinitePoset, PosetAlgebra, check_adjoint, check_completion,
    check_modal_structure, complete_modal_structure, dm_completion, dm_completion_oracle,
    extend_left_adjoint, isomorphic, posets_up_to_iso, preservation_check, preserves_joins,
    random_poset, right_adjoint_oracle, term_preserved,
)
from .counterexample import (
    MU, Const, Nat, Shifted, ord_approximants, wrongconf_verify,
)
from .generate import (
    random_clause, random_descriptor, random_literal, random_simple_system, random_spec,
    random_system, random_term,
)
from .kripke import (
    KripkeModel, Sampler, check_eq, check_leq, eval_term, lfp_iterate, product_with_two,
    random_model, semantic_cover_oracle, whitman_check,
)
from .normal import guard, is_guarded, normal_key, simplify, spcon
from .systems import (
    arrow_meet, bekic_lfp, bekic_solve, classify_system, cofinal_check, compile_sigma1,
    guard_steps, powerset_translate, regular_harness, sandwich_check, simultaneous_lfp,
    simultaneous_solve, step_map, transfer_check, unguarded,
)
from .terms import BOT, TOP, And, Arrow, Box, Dia, Gen, Mu, Not, Nu, Or, Var


@dataclass
class Row:
    suite: str
    check: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    name: str
    rows: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return bool(self.rows) and all(r.passed for r in self.rows)

    def tsv(self) -> str:
        lines = ["suite\tcheck\tverdict\tdetail"]
        for r in self.rows:
            lines.append(f"{r.suite}\t{r.check}\t{'pass' if r.passed else 'FAIL'}\t{r.detail}")
        return "\n".join(lines) + "\n"


class _Tally:
    """Counts trials per check; keeps the first failure as detail."""

    def __init__(self, suite: str):
        self.suite = suite
        self.counts: dict[str, list] = {}

    def add(self, check: str, ok: bool, why: str = "") -> None:
        c = self.counts.setdefault(check, [0, 0, ""])
        c[0] += 1
        if not ok:
            c[1] += 1
            if not c[2]:
                c[2] = why
        return ok

    def rows(self) -> list[Row]:
        out = []
        for check, (n, bad, why) in self.counts.items():
            detail = f"{n - bad}/{n} passed"
            if bad:
                detail += f"; first failure: {why}"
            out.append(Row(self.suite, check, bad == 0 and n > 0, detail))
        return out


def _n(budget, default):
    return default if budget is None else budget


def _vec_leq(alg, u, v):
    return all(alg.leq(a, b) for a, b in zip(u, v))


# -- 1: elimination order does not matter -----------------------------------------

def _chain(n):
    class Chain:
        bot = 0
        top = n - 1

        @staticmethod
        def leq(a, b):
            return a <= b
    return Chain


def monotone_pair_maps(n: int) -> list:
    """All monotone maps from the square of the n-chain to the n-chain."""
    pts = list(itertools.product(range(n), repeat=2))
    out = []
    for vals in itertools.product(range(n), repeat=len(pts)):
        f = dict(zip(pts, vals))
        if all(f[(a, b)] <= f[(c, d)] for (a, b) in pts for (c, d) in pts if a <= c and b <= d):
            out.append(f)
    return out


def suite_bekic(seed: int, budget=None) -> list[Row]:
    t = _Tally("bekic")
    rng = random.Random(seed)
    for i in range(_n(budget, 1000)):
        s = random_system(rng, 3, 4, kind=rng.choice(("sigma1", "general")))
        m = random_model(rng.randrange(1 << 30), max_states=6)
        a = bekic_solve(s, m)
        b, _ = simultaneous_solve(s, m)
        t.add("random systems: one variable at a time = joint iteration", a == b, f"system {i}")
    for n in (2, 3):
        maps = monotone_pair_maps(n)
        for f1 in maps:
            for f2 in maps:
                fs = [lambda v, f=f1: f[v], lambda v, f=f2: f[v]]
                a = bekic_lfp(fs, [0, 0])
                b, _ = simultaneous_lfp(fs, [0, 0])
                t.add(f"all monotone pairs on the {n}-chain", a == b, f"{f1} {f2}")
    return t.rows()


# -- 2: least fixed points of least-fixed-point terms are reached by iteration --------

def suite_constructive(seed: int, budget=None) -> list[Row]:
    t = _Tally("constructive")
    rng = random.Random(seed)
    for i in range(_n(budget, 500)):
        body = random_term(rng, 3, variables=("x",), kind="sigma1")
        m = random_model(rng.randrange(1 << 30), max_states=4)
        pre = [z for z in m.elements() if evaluate(m, body, {"x": z}) & ~z == 0]
        park = m.top
        for z in pre:
            park &= z
        trace = lfp_iterate(m, body, "x")
        t.add("least prefixed point = limit of approximants", park == trace.final, f"term {i}")
        t.add("least prefixed point is prefixed", park in pre, f"term {i}")
        t.add("stabilises within |states|+1 steps", trace.stabilized_at <= m.n + 1,
              f"{trace.stabilized_at} steps on {m.n} states")
    return t.rows()


# -- 3: guarding -------------------------------------------------------------------------

def suite_guard(seed: int, budget=None) -> list[Row]:
    t = _Tally("guard")
    rng = random.Random(seed)
    n = _n(budget, 500)
    for i in range(n):
        term = random_term(rng, 4, kind="general")
        m = random_model(rng.randrange(1 << 30), max_states=5)
        g = guard(term)
        t.add("term and its guarded form agree", eval_term(m, term) == eval_term(m, g), str(term))
        t.add("guarded form is guarded", is_guarded(g), str(g))
    for i in range(max(1, n // 5)):
        s = random_system(rng, 3, 3, kind="sigma1")
        m = random_model(rng.randrange(1 << 30), max_states=4)
        steps = guard_steps(s)
        for f, g in zip(steps, steps[1:]):
            loops = [x for x in f.bound if x in unguarded(f.rhs(x), {x})]
            if loops:
                t.add("loop elimination: chains cofinal", cofinal_check(f, g, m, None, 20), str(f))
            else:
                t.add("substitution: F^n <= G^n <= F^2n, n <= 20", sandwich_check(f, g, m, None, 20), str(f))
        t.add("guarded system has the same solution",
              bekic_solve(s, m) == bekic_solve(steps[-1], m), str(s))
        t.add("guarded system is guarded", classify_system(steps[-1]).guarded, str(steps[-1]))
    return t.rows()


# -- 4: subset translation -----------------------------------------------------------------

def suite_powerset(seed: int, budget=None) -> list[Row]:
    t = _Tally("powerset")
    rng = random.Random(seed)
    for i in range(_n(budget, 200)):
        s = random_simple_system(rng, 3)
        m = random_model(rng.randrange(1 << 30), max_states=4)
        tr = powerset_translate(s)
        t.add("target is disjunctive-simple", classify_system(tr.target).disjunctive_simple, str(tr.target))
        fstep = step_map(s, m)
        gstep = step_map(tr.target, m)
        ok = True
        for _ in range(20):
            x = tuple(rng.randrange(1 << m.n) for _ in s.bound)
            fx = dict(zip(s.bound, fstep(x)))
            gx = dict(zip(tr.target.bound, gstep(tuple(tr.embed(m, dict(zip(s.bound, x)))[v]
                                                          for v in tr.target.bound))))
            ok = ok and gx == tr.embed(m, fx)
        t.add("G(i(x))_S = meet of F_j(x) over S, every nonempty S", ok, str(s))
        sol = bekic_solve(s, m)
        t.add("projection after embedding is the identity", tr.project(tr.embed(m, sol)) == sol, str(s))
        t.add("approximants transfer stage by stage", transfer_check(tr, m, None, 12), str(s))
    return t.rows()


# -- 5: meets of arrows on one action ---------------------------------------------------------

def suite_arrow_cases(seed: int, budget=None) -> list[Row]:
    t = _Tally("arrow_cases")
    rng = random.Random(seed)
    sampler = Sampler(exhaustive_states=3, random_count=200, random_max_states=6, seed=seed)
    count = _n(budget, 30)
    cases = {"both empty": (0, 0), "one side empty": (0, None), "both nonempty": (None, None)}
    for label, (kx, ky) in cases.items():
        for i in range(count if label != "both empty" else 1):
            nx = kx if kx is not None else rng.randint(1, 2)
            ny = ky if ky is not None else rng.randint(1, 2)
            if label == "one side empty" and rng.random() < 0.5:
                nx, ny = ny if ny else rng.randint(1, 2), 0
            xs = [random_term(rng, 1, kind="none") for _ in range(nx)]
            ys = [random_term(rng, 1, kind="none") for _ in range(ny)]
            lhs = And(Arrow("a", tuple(xs)), Arrow("a", tuple(ys)))
            v = check_eq(lhs, arrow_meet("a", xs, ys), sampler)
            t.add(f"{label}: identity unrefuted", bool(v), f"{xs} {ys}")
    return t.rows()


# -- 6: reflexive-transitive diamond ------------------------------------------------------------

def suite_kleene_star(seed: int, budget=None) -> list[Row]:
    t = _Tally("kleene_star")
    rng = random.Random(seed)
    star = Mu("y", Or(Gen("p"), Dia("a", Var("y"))))
    for i in range(_n(budget, 200)):
        m = random_model(rng.randrange(1 << 30), max_states=6)
        acc, cur = 0, m.gen("p")
        for _ in range(m.n + 1):
            acc |= cur
            cur = m.dia("a", cur)
        t.add("<a*>p = union of <a>^n p", eval_term(m, star) == acc, repr(m))
    sampler = Sampler(exhaustive_states=2, random_count=100, seed=seed)
    for i in range(_n(budget, 100)):
        b = random_clause(rng).to_term()
        it = cv.star_adjoint_iteration("a", b)
        t.add("inverse-diamond iteration stabilises", it.stabilized, str(b))
        t.add("stabilises within |FL(b)| steps", it.within_bound, f"{it.steps} steps, |FL| = {it.fl_size}")
        s = cv.star_meet(it)
        t.add("<a*>(meet of iterates) <= b unrefuted",
              bool(check_leq(Mu("z", Or(s, Dia("a", Var("z")))), b, sampler)), str(b))
    return t.rows()


# -- 7, 8, 9: covers ------------------------------------------------------------------------------

def _lower_eq(be, got, oracle) -> bool:
    return (all(any(be.vec_leq(a, b) for b in oracle) for a in got)
            and all(any(be.vec_leq(b, a) for a in got) for b in oracle))


class _Oracle:
    """Brute-force covers of one descriptor, with its graph tabulated once."""

    def __init__(self, d, be):
        self.be = be
        self.carrier = list(itertools.product(range(1 << be.alg.n), repeat=d.arity))
        self.table = {x: cv.apply(d, x, be) for x in self.carrier}

    def __call__(self, tgt):
        """Maximal elements, as ``semantic_cover_oracle`` reports them."""
        tgt = tgt if isinstance(tgt, tuple) else (tgt,)
        alg = self.be.alg
        return semantic_cover_oracle(self.table.__getitem__, tgt, self.carrier,
                                     lambda u, v: _vec_leq(alg, u, v), limit=1 << 16)

    def region(self, tgt) -> set:
        """Every input sent below ``tgt``."""
        tgt = tgt if isinstance(tgt, tuple) else (tgt,)
        return {x for x, y in self.table.items() if all(a & ~b == 0 for a, b in zip(y, tgt))}

    def generates(self, covers, tgt) -> bool:
        """The lower set of ``covers`` is exactly the region below ``tgt``."""
        region = self.region(tgt)
        if not all(c in region for c in covers):
            return False
        return all(any(all(a & ~b == 0 for a, b in zip(x, c)) for c in covers) for x in region)


def primitive_descriptors(m: KripkeModel, rng: random.Random) -> list:
    k = rng.randrange(1 << m.n)
    spec1 = random_spec(rng, max_block=2)
    return [cv.Identity(), cv.Proj(0, 2), cv.Proj(1, 2), cv.Const(k, 1), cv.Const(k, 2),
            cv.ConstMeet(k), cv.Join(2), cv.Join(3), cv.DiaOp("a"), cv.SpconOp(spec1),
            cv.Pair((cv.Proj(1, 2), cv.Proj(0, 2)))]


def suite_covers(seed: int, budget=None) -> list[Row]:
    t = _Tally("covers")
    rng = random.Random(seed)
    for i in range(_n(budget, 150)):
        m = random_model(rng.randrange(1 << 30), max_states=4)
        be = cv.FiniteBackend(m)
        ds = primitive_descriptors(m, rng)
        ds += [random_descriptor(rng, rng.randint(1, 2), 3, lambda r: r.randrange(1 << m.n))
               for _ in range(4)]
        for d in ds:
            oracle = _Oracle(d, be)
            tgts = list(itertools.product(range(1 << m.n), repeat=d.out))
            for tgt in tgts:
                got = cv.cover(d, tgt, be)
                ok = oracle.generates(got, tgt)
                t.add("finite backend: cover generates the oracle's lower set", ok, f"{d} at {tgt}")
                sound = all(_vec_leq(m, cv.apply(d, c, be), tgt) for c in got)
                t.add("finite backend: d(c) <= m for every cover", sound, f"{d} at {tgt}")
    sampler = Sampler(exhaustive_states=0, random_count=200, random_max_states=5, seed=seed)
    syn = cv.SyntacticBackend(sampler)
    const = lambda r: random_term(r, 1, kind="none")
    done = 0
    attempts = 0
    while done < _n(budget, 40) and attempts < 400:
        attempts += 1
        d = random_descriptor(rng, rng.randint(1, 2), 2, const)
        target = random_clause(rng).to_term()
        try:
            got = cv.cover(d, target, syn, budget=48)
        except cv.NotFiniteType:
            continue
        done += 1
        for c in got:
            v = check_leq(cv.apply(d, c, syn)[0], target, sampler)
            t.add("syntactic backend: d(c) <= m unrefuted over 200 models", bool(v), f"{d} at {target}")
    t.add("syntactic backend: enough descriptors with closed graphs", done >= _n(budget, 40) // 2,
          f"{done} of {attempts}")
    return t.rows()


def mu_bodies(rng: random.Random, m: KripkeModel) -> list:
    j, d, p = cv.Join(2), cv.DiaOp("a"), cv.Proj
    x, y = p(0, 2), p(1, 2)
    spec = random_spec(rng, max_block=1)
    out = [
        cv.compose(j, y, cv.compose(d, x)),
        x,
        y,
        cv.compose(cv.SpconOp(spec), *([x] * spec.arity)) if spec.arity else x,
        cv.compose(j, cv.compose(cv.ConstMeet(m.gen("p")), y), cv.compose(d, cv.compose(d, x))),
    ]
    out += [random_descriptor(rng, 2, 2, lambda r: r.randrange(1 << m.n), allow_mu=False)
            for _ in range(2)]
    return out


def _all_small_models(max_states: int) -> list[KripkeModel]:
    out = []
    for n in range(1, max_states + 1):
        for rel in range(1 << (n * n)):
            for val in range(1 << n):
                edges = {"a": [(i, j) for i in range(n) for j in range(n) if rel >> (i * n + j) & 1]}
                out.append(KripkeModel.from_edges(n, edges, {"p": val}))
    return out


def suite_mu_covers(seed: int, budget=None) -> list[Row]:
    t = _Tally("mu_covers")
    rng = random.Random(seed)
    models = _all_small_models(2)
    models += [random_model(rng.randrange(1 << 30), max_states=4, gens=("p",), min_states=3)
               for _ in range(_n(budget, 100))]
    for m in models:
        be = cv.FiniteBackend(m)
        for inner in mu_bodies(rng, m):
            oracle = _Oracle(cv.ParamMu(inner), be)
            for l in range(1 << m.n):
                g = cv.cover_graph(inner, l, be)
                got = cv.mu_cover(inner, l, be)
                t.add("mu cover generates the oracle's lower set", oracle.generates(got, l),
                      f"{inner} at {l}")
                t.add("pruned mu cover is an antichain",
                      all(not be.vec_leq(a, b) for a in got for b in got if a != b), f"{inner} at {l}")
                if len(g.edges) <= 40:
                    pans = be.prune(cv.pans(g, be))
                    t.add("pan enumeration and lasso search agree", _lower_eq(be, pans, got),
                          f"{inner} at {l}")
    return t.rows()


def expected_spcon_cover(spec, clause) -> set:
    """The cover vectors written out coordinate by coordinate."""
    coords = spec.coords()
    if clause.is_top() or spec.is_inconsistent() or set(spec.literals) & set(clause.literals):
        return {tuple(normal_key(TOP) for _ in coords)}
    out = set()
    for act, xs in spec.blocks:
        d = clause.d(act) if clause.d(act) is not None else BOT
        for y in xs:
            out.add(tuple(normal_key(d) if (a, v) == (act, y) else normal_key(TOP) for a, v in coords))
        for e in clause.E(act):
            out.add(tuple(normal_key(simplify(Or(d, e))) if a == act else normal_key(TOP)
                          for a, v in coords))
    return out


def suite_spcon_covers(seed: int, budget=None) -> list[Row]:
    t = _Tally("spcon_covers")
    rng = random.Random(seed)
    sampler = Sampler(exhaustive_states=0, random_count=200, random_max_states=5, seed=seed)
    for i in range(_n(budget, 100)):
        spec = random_spec(rng, acts=("a", "b"))
        clause = random_clause(rng, acts=("a", "b"))
        got = cv.spcon_cover(spec, clause)
        keys = {tuple(normal_key(c) for c in v) for v in got}
        t.add("cover vectors match the clause formulas", keys == expected_spcon_cover(spec, clause),
              f"{spec} / {clause}")
        names = [x for _, x in spec.coords()]
        for v in got:
            lhs = spcon(spec, dict(zip(names, v)))
            t.add("special conjunction at a cover is below the clause",
                  bool(check_leq(lhs, clause.to_term(), sampler)), f"{spec} / {clause}")
    return t.rows()


# -- 10: the product with two ---------------------------------------------------------------------

def suite_whitman(seed: int, budget=None) -> list[Row]:
    t = _Tally("whitman")
    rng = random.Random(seed)
    acts = ("a", "b")
    n = _n(budget, 200)
    evals_per = max(1, 1000 // n)
    for i in range(n):
        m = random_model(rng.randrange(1 << 30), max_states=3, actions=acts)
        lits = sorted({random_literal(rng) for _ in range(rng.randint(0, 2))}, key=str)
        ys = {}
        for a in acts:
            ys[a] = [z for z in (rng.randrange(1, 1 << m.n) for _ in range(rng.randint(0, 2)))]
        alg = product_with_two(m, ys, lits)
        elems = list(alg.elements())
        for a in acts:
            t.add("diamond of bottom is bottom", alg.dia(a, alg.bot) == alg.bot, repr(m))
            t.add("diamond preserves binary joins",
                  all(alg.dia(a, alg.join(u, v)) == alg.join(alg.dia(a, u), alg.dia(a, v))
                      for u in elems for v in elems), repr(m))
        for _ in range(evals_per):
            term = random_term(rng, 3, acts=acts, kind="general")
            t.add("first projection is a morphism", evaluate(alg, term)[0] == eval_term(m, term), str(term))
        yterms = {a: [random_term(rng, 2, acts=acts, kind="none") for _ in range(rng.randint(1, 2))]
                  for a in acts}
        rep = whitman_check(lits, yterms, m)
        if rep.kind == "certificate":
            t.add("certificate has top second coordinate", rep.certificate[1] is True, str(yterms))
        else:
            t.add("non-certificate outcome justified", _justified(rep, lits, yterms, m), str(rep))
    return t.rows()


def _justified(rep, lits, yterms, m) -> bool:
    if rep.kind == "literal_clash":
        return any(Not(l) in lits for l in lits)
    act, y = rep.detail
    return eval_term(m, y) == 0


# -- 11: word-indexed harness ------------------------------------------------------------------------

def suite_harness(seed: int, budget=None) -> list[Row]:
    t = _Tally("harness")
    rng = random.Random(seed)
    for i in range(_n(budget, 100)):
        f = random_term(rng, 3, variables=("x", "y"), kind="sigma1")
        g = random_term(rng, 3, variables=("x", "y"), kind="sigma1")
        m = random_model(rng.randrange(1 << 30), max_states=4)
        tr = regular_harness(f, g, m, depth=10)
        for k, v in tr.verdicts.items():
            t.add(k.replace("_", " "), v, f"f = {f}; g = {g}")
    return t.rows()


# -- 12: the reduced power -----------------------------------------------------------------------------

def suite_counterexample(seed: int, budget=None) -> list[Row]:
    t = _Tally("counterexample")
    n = _n(budget, 100)
    rep = wrongconf_verify(n, [Const(Nat(0)), MU, Shifted(3)])
    for r in rep.relations:
        key = r.name.split("(")[0] if r.name.startswith("f(") else r.name.split("_")[0]
        if r.name.startswith("f(") and "~" in r.name:
            key = "f(phi_n) ~ phi_(n-1)"
        elif r.name.startswith("f("):
            key = "f(phi_n) <= phi_(n-1)"
        elif r.name.startswith("phi"):
            key = "phi_(n+1) <= phi_n"
        else:
            key = "mu not below phi_0"
        t.add(key, r.ok, r.name)
    for r in (r for b in rep.bounds for r in b):
        t.add("lower-bound replay", r.ok, r.name)
    chain = ord_approximants(n)
    t.add("approximant chain strictly increasing",
          all(a < b for a, b in zip(chain, chain[1:])), "")
    t.add("approximant chain never reaches omega", not any(a.is_omega for a in chain), "")
    return t.rows()


# -- 13: completion -------------------------------------------------------------------------------------

def _candidate_maps(p: FinitePoset, rng: random.Random) -> list[dict]:
    els = list(p.elements)
    maps = [{x: x for x in els}]
    if not els:
        return maps
    for c in els:
        maps.append({x: c for x in els})
    tries = 0
    while tries < 60 and len(maps) < 12:
        tries += 1
        f = {x: rng.choice(els) for x in els}
        if all(p.le(f[a], f[b]) for a in els for b in els if p.le(a, b)):
            maps.append(f)
    return [f for f in maps if not preserves_joins(p, f)]


def _closed_terms(max_depth: int, kind: str) -> list:
    """Every closed term up to ``max_depth`` with one generator and action."""
    atoms = [TOP, BOT, Gen("p"), Not(Gen("p"))]

    def gen(d, vs):
        out = list(atoms) + [Var(v) for v in vs]
        if d == 0:
            return out
        smaller = gen(d - 1, vs)
        for a in smaller:
            out += [Dia("a", a), Box("a", a)]
            for b in smaller:
                out += [And(a, b), Or(a, b)]
        v = f"v{len(vs)}"
        binder = Mu if kind == "sigma1" else Nu
        out += [binder(v, b) for b in gen(d - 1, vs + (v,))]
        return out

    return list(dict.fromkeys(gen(max_depth, ())))


def suite_completion(seed: int, budget=None) -> list[Row]:
    t = _Tally("completion")
    rng = random.Random(seed)
    counts = [len(posets_up_to_iso(k)) for k in range(6)]
    t.add("posets up to isomorphism on 0..5 points", counts == [1, 1, 2, 5, 16, 63], str(counts))
    posets = [p for k in range(6) for p in posets_up_to_iso(k)]
    posets += [random_poset(rng, 8) for _ in range(_n(budget, 200))]
    for p in posets:
        c = dm_completion(p)
        t.add("cuts match the subset oracle", c.cuts == dm_completion_oracle(p).cuts, repr(p))
        rep = check_completion(c)
        t.add("complete, order embedding, join and meet dense", rep.ok, repr(p))
        cc = dm_completion(c.as_poset())
        t.add("completion idempotent up to isomorphism", isomorphic(cc.as_poset(), c.as_poset()), repr(p))
        for f in _candidate_maps(p, rng):
            e = extend_left_adjoint(p, f, c)
            ar = check_adjoint(e)
            t.add("extension laws and adjunction, all cut pairs", ar.ok, f"{p} {f}")
            t.add("right adjoint matches search",
                  all(e.g(b) == right_adjoint_oracle(c, e.ext, b) for b in c.cuts), f"{p} {f}")
    for i in range(_n(budget, 30) // 3 or 1):
        m = random_model(rng.randrange(1 << 30), max_states=3, gens=("p",))
        base = PosetAlgebra.from_model(m)
        cm = complete_modal_structure(base)
        t.add("diamonds extend to a normal modal structure", check_modal_structure(cm).ok, repr(m))
        for _ in range(5):
            body = random_term(rng, 3, gens=("p",), variables=("x",), kind="none")
            rep = preservation_check(base, cm, body, "x")
            t.add("least fixed points preserved through the embedding", rep.verdict == PRESERVED, str(body))
    anti = FinitePoset(["a", "b"])
    pa = PosetAlgebra(anti, {}, {"ca": "a", "cb": "b"})
    rep = preservation_check(pa, complete_modal_structure(pa), Or(Or(Gen("ca"), Gen("cb")), Var("x")), "x")
    t.add("missing join reported as a hypothesis failure", rep.verdict == HYPOTHESIS_FAILURE, rep.detail)
    algebras = []
    for k in range(3):
        m = random_model(seed * 3 + k, max_states=3, gens=("p",), min_states=2)
        base = PosetAlgebra.from_model(m)
        algebras.append((base, complete_modal_structure(base)))
    for kind in ("sigma1", "pi1"):
        for term in _closed_terms(2, kind):
            for base, cm in algebras:
                t.add(f"{kind} terms of depth <= 2 preserved", term_preserved(base, cm, term), str(term))
        for _ in range(_n(budget, 150)):
            term = random_term(rng, 3, gens=("p",), kind=kind)
            for base, cm in algebras:
                t.add(f"{kind} terms of depth 3 preserved", term_preserved(base, cm, term), str(term))
    return t.rows()


# -- 14: compilation ----------------------------------------------------------------------------------

def suite_compile(seed: int, budget=None) -> list[Row]:
    t = _Tally("compile")
    rng = random.Random(seed)
    for i in range(_n(budget, 300)):
        term = random_term(rng, 4, kind="sigma1", arrows=True)
        m = random_model(rng.randrange(1 << 30), max_states=5)
        comp = compile_sigma1(term)
        t.add("compiled system is elementary", classify_system(comp.system).elementary, str(term))
        t.add("designated solution = value of the term", comp.value(m) == eval_term(m, term), str(term))
    return t.rows()


SUITES: dict[str, Callable] = {
    "bekic": suite_bekic,
    "constructive": suite_constructive,
    "guard": suite_guard,
    "powerset": suite_powerset,
    "arrow_cases": suite_arrow_cases,
    "kleene_star": suite_kleene_star,
    "covers": suite_covers,
    "mu_covers": suite_mu_covers,
    "spcon_covers": suite_spcon_covers,
    "whitman": suite_whitman,
    "harness": suite_harness,
    "counterexample": suite_counterexample,
    "completion": suite_completion,
    "compile": suite_compile,
}


class UnknownSuite(KeyError):
    pass


def run_suite(name: str, seed: int = 0, budget: int | None = None) -> SuiteResult:
    if name not in SUITES:
        raise UnknownSuite(name)
    start = time.perf_counter()
    rows = SUITES[name](seed, budget)
    return SuiteResult(name, rows, time.perf_counter() - start)
