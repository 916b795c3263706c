import random

import pytest
from hypothesis import given, strategies as st

from mualg.generate import random_term
from mualg.kripke import random_model
from mualg.normal import (
    SpconSpec, arrow, classify, fl_closure, guard, is_guarded, is_nnf, modal_cnf, nnf, spcon, unfold,
)
from mualg.parsing import PositivityError, TermSyntaxError, parse_term
from mualg.printing import print_term
from mualg.terms import (
    BOT, And, Box, Dia, Gen, Mu, Not, Nu, Or, Var, alpha_eq, children, free_vars, substitute,
)

from oracles import all_models, set_eval

P = parse_term
seeds = st.integers(0, 10**6)


def test_nnf_pushes_negation_through_modalities():
    assert nnf(P("~(p & <a> q)")) == P("~p | [a] ~q")
    assert nnf(P("p")) == P("p")


def test_nnf_of_negated_fixed_point_is_dual_fixed_point():
    got = nnf(P("~(mu x . p | <a> x)"))
    assert alpha_eq(got, P("nu x . ~p & [a] x"))
    for m in all_models(3):
        assert set_eval(m, got) == set_eval(m, P("~(mu x . p | <a> x)"))


def test_substitute_examples():
    assert substitute(P("x | p", ["x"]), {"x": P("<a> q")}) == P("<a> q | p")
    got = substitute(P("mu x . x | y", ["y"]), {"y": Var("x")})
    assert isinstance(got, Mu) and got.var != "x"
    assert free_vars(got) == {"x"}
    assert alpha_eq(got, P("mu z . z | x", ["x"]))
    assert substitute(P("p"), {"x": P("q")}) == P("p")


@pytest.mark.parametrize("text, tag", [
    ("mu x . p | <a> x", "sigma1"),
    ("nu x . p & [a] x", "pi1"),
    ("mu x . p | <a> nu y . x & [a] y", "general"),
])
def test_classify(text, tag):
    assert classify(P(text)) == tag


def test_classify_composition_of_classes():
    # a least fixed point inside a greatest one, without feedback
    assert classify(P("nu y . (mu x . p | <a> x) & [a] y")) == "comp_sigma1_pi1"


def fl_oracle(t):
    """Closure by the textbook clauses: subformulas, and the unfolding of
    every fixed point."""
    out = []
    todo = [t]
    while todo:
        u = todo.pop()
        if any(u == v for v in out):
            continue
        out.append(u)
        if isinstance(u, (Mu, Nu)):
            todo.append(substitute(u.body, {u.var: u}))
        else:
            todo.extend(children(u))
    return set(out)


def test_fl_closure_examples():
    assert set(fl_closure(P("p"))) == {P("p")}
    assert set(fl_closure(P("<a> p"))) == {P("<a> p"), P("p")}
    mu = P("mu x . p | <a> x")
    assert set(fl_closure(mu)) == {mu, Or(Gen("p"), Dia("a", mu)), Gen("p"), Dia("a", mu)}


@given(seeds)
def test_fl_closure_matches_textbook_closure(seed):
    t = nnf(random_term(random.Random(seed), 3))
    assert set(fl_closure(t)) == fl_oracle(t)


def test_guarding_examples():
    assert is_guarded(P("mu x . <a> x"))
    assert not is_guarded(P("mu x . x | <a> x"))
    g = guard(P("mu x . x | p"))
    assert is_guarded(g)
    for m in all_models(2):
        assert set_eval(m, g) == set_eval(m, P("p"))


@given(seeds, seeds)
def test_guard_preserves_meaning(seed, mseed):
    t = random_term(random.Random(seed), 4)
    g = guard(t)
    assert is_guarded(g)
    m = random_model(mseed, 4)
    assert set_eval(m, g) == set_eval(m, t)


def test_arrow_and_special_conjunction():
    assert arrow("a", []) == Box("a", BOT)
    assert arrow("a", [Var("x")]) == And(Box("a", Var("x")), Dia("a", Var("x")))
    got = spcon(SpconSpec.make([Gen("p")], {"a": ["x", "y"]}))
    want = P("p & [a] (x | y) & <a> x & <a> y", ["x", "y"])
    for m in all_models(2, gens=("p", "x", "y")):
        assert set_eval(m, got) == set_eval(m, want)


def test_modal_cnf_examples():
    (c,) = modal_cnf(P("~p | <a> q"))
    assert c.literals == {Not(Gen("p"))} and c.d("a") == Gen("q")
    cs = modal_cnf(P("p & [a] q"))
    assert {c.to_term() for c in cs} == {P("p"), P("[a] q")}
    star = P("mu y . p | <a> y")
    (c,) = modal_cnf(star)
    assert c.literals == {Gen("p")} and c.d("a") == star


@given(seeds, seeds)
def test_modal_cnf_is_equivalent(seed, mseed):
    t = nnf(random_term(random.Random(seed), 3))
    cs = modal_cnf(t)
    m = random_model(mseed, 4)
    full = set(range(m.n))
    got = set(full)
    for c in cs:
        got &= set_eval(m, c.to_term())
    assert got == set_eval(m, t)


def test_unfold():
    assert unfold(P("mu x . <a> x")) == Dia("a", P("mu x . <a> x"))
    mu = P("mu x . p | <a> x")
    assert unfold(mu) == Or(Gen("p"), Dia("a", mu))
    with pytest.raises(ValueError):
        unfold(P("p"))


@given(seeds, seeds)
def test_nnf_preserves_meaning(seed, mseed):
    t = random_term(random.Random(seed), 4)
    n = nnf(Not(t))
    assert is_nnf(n)
    m = random_model(mseed, 4)
    assert set_eval(m, n) == set(range(m.n)) - set_eval(m, t)


def test_parse_and_positivity():
    assert P("mu x . p | <a> x") == Mu("x", Or(Gen("p"), Dia("a", Var("x"))))
    with pytest.raises(PositivityError):
        P("mu x . ~x")
    with pytest.raises(TermSyntaxError):
        P("p &")
    # double negation is positive
    assert P("mu x . ~~x") == Mu("x", Not(Not(Var("x"))))


def test_precedence():
    assert P("~p & q | r") == Or(And(Not(Gen("p")), Gen("q")), Gen("r"))
    assert P("<a> p & q") == And(Dia("a", Gen("p")), Gen("q"))
    assert P("mu x . p | x") == Mu("x", Or(Gen("p"), Var("x")))


def test_round_trip_on_seeded_terms():
    rng = random.Random(7)
    for _ in range(1000):
        t = random_term(rng, 4, arrows=True)
        text = print_term(t)
        back = P(text)
        assert alpha_eq(back, t)
        assert print_term(back) == text


@given(seeds, seeds)
def test_unfolding_preserves_meaning(seed, mseed):
    t = random_term(random.Random(seed), 4)
    if isinstance(t, (Mu, Nu)):
        m = random_model(mseed, 4)
        assert set_eval(m, unfold(t)) == set_eval(m, t)
