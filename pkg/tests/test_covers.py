import itertools
import random

import pytest
from hypothesis import given, strategies as st

from mualg.covers import (
    Const, FiniteBackend, Identity, Join, NoCoverRule, Proj, SpconOp, SyntacticBackend, apply,
    automaton_reach, constructive_sup, cover,    cover_graph, descriptor_from_term, dia_right_adjoint, lasso_meets, mu_cover, pans,
    spcon_cover, star_adjoint_iteration, star_meet,
)
from mualg.generate import random_clause, random_descriptor, random_spec
from mualg.kripke import Sampler, check_eq, check_leq, eval_term, random_model
from mualg.normal import Clause, SpconSpec, fl_closure, modal_cnf, nnf, spcon
from mualg.parsing import parse_term
from mualg.terms import BOT, TOP, Dia, Gen, Mu, Not, Or, Var

from oracles import set_eval, to_mask

P = parse_term
seeds = st.integers(0, 10**6)


def leq(a, b):
    return a & ~b == 0


def brute_lower_set(d, m, tgt):
    """Every input vector mapped below the target, by enumeration."""
    n = 1 << m.n
    be = FiniteBackend(m)
    tgt = tgt if isinstance(tgt, tuple) else (tgt,)
    return {v for v in itertools.product(range(n), repeat=d.arity)
            if all(leq(a, b) for a, b in zip(apply(d, v, be), tgt))}


def generated(covers, m, arity):
    n = 1 << m.n
    return {v for v in itertools.product(range(n), repeat=arity)
            if any(all(leq(a, b) for a, b in zip(v, c)) for c in covers)}


def test_primitive_covers(m1):
    be = FiniteBackend(m1)
    assert cover(Identity(), 0b10, be) == [(0b10,)]
    assert cover(Join(), 0b10, be) == [(0b10, 0b10)]
    assert cover(Const(0b01, 1), 0b10, be) == []
    assert cover(Const(0b10, 1), 0b10, be) == [(0b11,)]
    syn = SyntacticBackend()
    assert cover(Join(), P("p"), syn) == [(P("p"), P("p"))]


def test_right_adjoint_of_diamond_on_clauses():
    assert dia_right_adjoint("a", modal_cnf(P("~p | <a> q | [a] r"))) == Gen("q")
    assert dia_right_adjoint("a", modal_cnf(TOP)) == TOP
    assert dia_right_adjoint("a", modal_cnf(P("~p"))) == BOT


@given(seeds)
def test_right_adjoint_of_diamond_is_sound(seed):
    rng = random.Random(seed)
    b = random_clause(rng).to_term()
    x = dia_right_adjoint("a", modal_cnf(b))
    assert check_leq(Dia("a", x), b, Sampler(3, random_count=40))


def test_special_conjunction_cover_formulas():
    spec = SpconSpec.make([Gen("p")], {"a": ["x1", "x2"]})
    d, e = Gen("d"), Gen("e")
    clause = Clause.make([Not(Gen("q"))], {"a": d}, {"a": [e]})
    got = set(spcon_cover(spec, clause))
    assert got == {(d, TOP), (TOP, d), (Or(d, e), Or(d, e))}
    assert spcon_cover(spec, Clause.make([Gen("p")])) == [(TOP, TOP)]
    sampler = Sampler(exhaustive_states=2, random_count=200, random_max_states=5)
    for c in got:
        vals = dict(zip(("x1", "x2"), c))
        assert check_leq(spcon(spec, {k: v for k, v in vals.items()}), clause.to_term(), sampler)


@given(seeds)
def test_special_conjunction_cover_is_sound(seed):
    rng = random.Random(seed)
    spec, clause = random_spec(rng), random_clause(rng)
    sampler = Sampler(exhaustive_states=2, random_count=60, random_max_states=5, seed=seed)
    names = [y for _, y in spec.coords()]
    for c in spcon_cover(spec, clause):
        assert check_leq(spcon(spec, dict(zip(names, c))), clause.to_term(), sampler)


@given(seeds, seeds)
def test_finite_covers_match_brute_force(seed, mseed):
    rng = random.Random(seed)
    m = random_model(mseed, 3)
    be = FiniteBackend(m)
    d = random_descriptor(rng, rng.randint(1, 2), 3, lambda r: r.randrange(1 << m.n))
    for tgt in range(1 << m.n):
        got = cover(d, tgt, be)
        assert generated(got, m, d.arity) == brute_lower_set(d, m, tgt)


@given(seeds)
def test_finite_special_conjunction_cover(mseed):
    m = random_model(mseed, 3)
    be = FiniteBackend(m)
    spec = random_spec(random.Random(mseed))
    d = SpconOp(spec)
    for tgt in range(1 << m.n):
        assert generated(cover(d, tgt, be), m, d.arity) == brute_lower_set(d, m, tgt)


def test_cover_graph_shapes(m1):
    be = FiniteBackend(m1)
    # x ignored: one step to the top vertex, labelled by l, then a loop
    g = cover_graph(Proj(1, 2), 0b10, be)
    assert g.vertices == [(0b10,), (0b11,)]
    assert g.edges == [(0, (0b10,), 1), (1, (0b11,), 1)]
    g = cover_graph(Const(0b11, 2), 0b01, be)
    assert g.vertices == [(0b01,)] and g.edges == []
    g = cover_graph(Join(2), 0b10, be)
    assert g.vertices == [(0b10,)] and g.edges == [(0, (0b10,), 0)]


def test_mu_cover_trivial_cases(m1):
    be = FiniteBackend(m1)
    assert mu_cover(Proj(1, 2), 0b10, be) == [(0b10,)]
    assert mu_cover(Proj(0, 2), 0b10, be) == [(0b11,)]


@given(seeds, st.sampled_from(["lasso", "pans"]))
def test_mu_cover_matches_fixed_point_oracle(mseed, method):
    m = random_model(mseed, 3)
    be = FiniteBackend(m)
    inner = descriptor_from_term(P("y | <a> x", ["x", "y"]), ["x", "y"])
    t = P("mu x . y | <a> x", ["y"])
    for l in range(1 << m.n):
        got = mu_cover(inner, l, be, method=method)
        want = {(y,) for y in range(1 << m.n) if leq(to_mask(set_eval(m, t, {"y": y})), l)}
        assert generated(got, m, 1) == want


def test_pans_and_lassos_agree():
    for seed in range(40):
        m = random_model(seed, 3)
        be = FiniteBackend(m)
        rng = random.Random(seed)
        inner = random_descriptor(rng, 2, 2, lambda r: r.randrange(1 << m.n), allow_mu=False)
        for l in range(1 << m.n):
            g = cover_graph(inner, l, be)
            assert sorted(be.prune(pans(g, be))) == sorted(be.prune(lasso_meets(g, be)))


def test_syntactic_mu_cover():
    syn = SyntacticBackend()
    inner = descriptor_from_term(P("y | <a> x", ["x", "y"]), ["x", "y"])
    (c,) = mu_cover(inner, P("~p | <a> q"), syn)
    assert check_eq(c[0], BOT)


def test_reach_examples(m1):
    be = FiniteBackend(m1)
    assert automaton_reach([], [0b10], be).reach == [0b10]
    assert automaton_reach([Identity()], [0b10], be).reach == [0b10]


def test_reach_stays_in_closure_lattice():
    """Vertices reached from a clause under a special conjunction scheme
    are meets of joins of closure members."""
    syn = SyntacticBackend(Sampler(2, random_count=30))
    spec = SpconSpec.make([], {"a": ["y0"]})
    b = P("~p | <a> q | [a] r")
    r = automaton_reach([SpconOp(spec)], [b], syn, budget=64)
    assert r.closed
    base = set(fl_closure(nnf(b))) | {TOP, BOT}
    for x in r.reach:
        for c in modal_cnf(nnf(x)):
            parts = list(c.literals) + [t for _, t in c.dia] + [u for _, us in c.boxes for u in us]
            assert all(p in base or nnf(p) in base for p in parts) or c.is_top()


def test_constructive_sup_examples(m1):
    be = FiniteBackend(m1)
    r = constructive_sup(Const(0b10, 1), (), be)
    assert r.value == (0b10,) and r.trace[1] == (0b10,)
    star = descriptor_from_term(P("p | <a> y", ["y"]), ["y"], lambda t: eval_term(m1, t))
    r = constructive_sup(star, (), be)
    assert r.value == (eval_term(m1, P("mu y . p | <a> y")),) == (0b11,)
    assert r.trace.index(r.value) <= 2
    assert r.bound_ok


def test_star_iteration_stabilizes_within_closure_size():
    it = star_adjoint_iteration("a", P("~p | <a> q"))
    assert it.stabilized and it.within_bound
    x = star_meet(it)
    # the meet is the largest x with <a>* x below b
    sampler = Sampler(3, random_count=40)
    assert check_leq(Mu("z", Or(x, Dia("a", Var("z")))), P("~p | <a> q"), sampler)


def test_descriptor_from_term_rejects_unsupported_shapes():
    with pytest.raises(NoCoverRule):
        descriptor_from_term(P("[a] y", ["y"]), ["y"])


def test_descriptor_from_term_agrees_with_evaluation():
    for seed in range(20):
        m = random_model(seed, 3)
        be = FiniteBackend(m)
        const = lambda t: eval_term(m, t)
        for text in ("y | <a> y", "p & <a> y", "arrow a {y, p}", "mu x . y | <a> x", "~q & arrow a {y}"):
            t = P(text, ["y"])
            d = descriptor_from_term(t, ["y"], const)
            for y in range(1 << m.n):
                assert apply(d, (y,), be) == (eval_term(m, t, {"y": y}),)
