import random

import pytest
from hypothesis import given, strategies as st

from mualg.generate import random_term
from mualg.kripke import (
    Refuted, Sampler, Unrefuted, atoms, char_hom, check_leq, eval_term, lfp_iterate, product_with_two,
    random_model, semantic_cover_oracle, whitman_check,
)
from mualg.parsing import parse_term
from mualg.terms import BOT, TOP, Gen, Not, Var

from oracles import all_models, set_eval, to_mask

P = parse_term
seeds = st.integers(0, 10**6)


def test_eval_on_m1(m1):
    assert eval_term(m1, BOT) == 0
    assert eval_term(m1, P("<a> p")) == 0b11
    assert eval_term(m1, P("mu x . p | <a> x")) == 0b11


def test_approximants_on_m1(m1):
    assert lfp_iterate(m1, P("p | <a> x", ["x"]), "x").values == [0, 0b10, 0b11, 0b11]
    assert lfp_iterate(m1, Var("x"), "x").values == [0, 0]
    assert lfp_iterate(m1, TOP, "x").values == [0, 0b11, 0b11]


@given(seeds, seeds)
def test_bitmask_eval_matches_set_eval(seed, mseed):
    t = random_term(random.Random(seed), 4, arrows=True)
    m = random_model(mseed, 6)
    assert eval_term(m, t) == to_mask(set_eval(m, t))


def test_exhaustive_eval_agreement_on_small_models():
    rng = random.Random(1)
    terms = [random_term(rng, 3) for _ in range(20)]
    for m in all_models(2):
        for t in terms:
            assert eval_term(m, t) == to_mask(set_eval(m, t))


@given(seeds, seeds)
def test_approximants_increase_to_the_fixed_point(seed, mseed):
    body = random_term(random.Random(seed), 3, variables=("x",), kind="none")
    m = random_model(mseed, 5)
    vals = lfp_iterate(m, body, "x").values
    assert all(a & ~b == 0 for a, b in zip(vals, vals[1:]))
    assert vals[-1] == vals[-2]
    assert len(vals) <= m.n + 2


def test_check_leq_verdicts():
    assert isinstance(check_leq(P("p & ~p"), BOT), Unrefuted)
    r = check_leq(TOP, P("p"))
    assert isinstance(r, Refuted)
    assert r.model.n == 1 and not r.model.valuation.get("p", 0) & 1
    assert check_leq(P("<a> (p | q)"), P("<a> p | <a> q"), Sampler(exhaustive_states=3, random_count=0))


def test_atoms_and_characters(m1):
    assert atoms(m1) == [0b01, 0b10]
    chi = char_hom(m1, 0b10)
    assert [chi(z) for z in range(4)] == [False, False, True, True]
    with pytest.raises(ValueError):
        char_hom(m1, 0)


def test_character_is_a_boolean_morphism():
    m = random_model(5, 4)
    for y in range(1, 1 << m.n):
        chi = char_hom(m, y)
        for a in m.elements():
            assert chi(m.neg(a)) == (not chi(a))
            for b in m.elements():
                assert chi(a | b) == (chi(a) or chi(b))


def test_product_with_two(m1):
    alg = product_with_two(m1, {})
    for z in m1.elements():
        for w in (False, True):
            assert alg.dia("a", (z, w)) == (m1.dia("a", z), False)
    alg = product_with_two(m1, {"a": [0b10]})
    assert alg.dia("a", (0b10, False)) == (0b11, True)
    for x in alg.elements():
        for y in alg.elements():
            assert alg.dia("a", alg.join(x, y)) == alg.join(alg.dia("a", x), alg.dia("a", y))
    assert alg.dia("a", alg.bot) == alg.bot


def test_whitman_outcomes(m1):
    assert whitman_check([Gen("p"), Not(Gen("p"))], {}, m1).kind == "literal_clash"
    r = whitman_check([], {"a": [BOT]}, m1)
    assert r.kind == "bottom_witness" and r.detail == ("a", BOT)
    m = m1.with_valuation({"p": 0b10, "q": 0b10})
    r = whitman_check([Gen("p")], {"a": [Gen("q")]}, m)
    assert r.kind == "certificate" and r.certificate[1] is True


def test_cover_oracle_examples(m1):
    assert semantic_cover_oracle(lambda z: z, 0b10, m1.elements(), m1.leq) == [0b10]
    # the preimage of {s1} under a is {s0, s1}, so only {s0} maps below it
    assert semantic_cover_oracle(lambda z: m1.dia("a", z), 0b10, m1.elements(), m1.leq) == [0b01]
    assert semantic_cover_oracle(lambda z: 0b11, 0b10, m1.elements(), m1.leq) == []


def test_random_model_is_deterministic():
    a, b = random_model(11, 5), random_model(11, 5)
    assert a.signature() == b.signature()
