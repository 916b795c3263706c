import itertools
import random

from hypothesis import given, strategies as st

from mualg.formats import parse_system
from mualg.generate import random_simple_system, random_system, random_term
from mualg.kripke import eval_term, random_model
from mualg.normal import guard
from mualg.parsing import parse_term
from mualg.systems import (
    arrow_meet, bekic_solve, classify_system, cofinal_check, compile_sigma1, guard_system,
    powerset_translate, regular_harness, sandwich_check, simultaneous_solve, step_map,
    transfer_check, unravel_to_simple,
)
from mualg.terms import BOT, And, Arrow, Var

from oracles import all_models

S = parse_system
P = parse_term
seeds = st.integers(0, 10**6)


def park_least(s, m, env=None):
    """Meet of every prefixed point, by enumerating all vectors."""
    step = step_map(s, m, env)
    best = None
    for vec in itertools.product(m.elements(), repeat=len(s.bound)):
        out = step(vec)
        if all(a & ~b == 0 for a, b in zip(out, vec)):
            best = vec if best is None else tuple(a & b for a, b in zip(best, vec))
    return dict(zip(s.bound, best))


def test_classification_examples():
    c = classify_system(S("x := arrow a {x}"))
    assert c.elementary and c.guarded
    assert classify_system(S("bound: x x2\nx := p & arrow a {x | x2}\nx2 := F")).simple
    c = classify_system(S("x := x | p"))
    assert not c.guarded and not c.elementary


def test_solutions_on_m1(m1):
    assert bekic_solve(S("x := p | <a> x"), m1) == {"x": 0b11}
    assert bekic_solve(S("bound: x y2\nx := y2\ny2 := x"), m1) == {"x": 0, "y2": 0}
    assert bekic_solve(S("free: y\nx := <a> y"), m1, {"y": 0b10}) == {"x": 0b11}
    assert bekic_solve(S("x := p | <a> x"), m1)["x"] == eval_term(m1, P("mu x . p | <a> x"))


@given(seeds, seeds)
def test_elimination_agrees_with_joint_iteration_and_park(seed, mseed):
    s = random_system(random.Random(seed), 2, 3)
    m = random_model(mseed, 3)
    a = bekic_solve(s, m)
    b, trace = simultaneous_solve(s, m)
    assert a == b
    assert a == park_least(s, m)


def test_guard_system_examples(m1):
    assert guard_system(S("x := x | p")) == S("x := p")
    got = guard_system(S("bound: x y2\nx := y2\ny2 := <a> x | p"))
    assert got == S("bound: x y2\nx := <a> x | p\ny2 := <a> x | p")
    assert guard_system(S("x := <a> x")) == S("x := <a> x")


@given(seeds, seeds)
def test_guarded_system_is_equivalent(seed, mseed):
    s = random_system(random.Random(seed), 3, 3)
    g = guard_system(s)
    assert classify_system(g).guarded
    m = random_model(mseed, 4)
    assert bekic_solve(g, m) == bekic_solve(s, m)


def test_sandwich_between_system_and_its_guard():
    f = S("bound: x y\nx := x | y | p\ny := <a> x")
    g = guard_system(f)
    for m in all_models(2):
        assert sandwich_check(f, g, m, None, 20)


def test_cofinality_examples(m1):
    f, g = S("x := F"), S("x := T")
    assert cofinal_check(f, f, m1, None, 5)
    assert not cofinal_check(f, g, m1, None, 1)


def test_unravel_examples():
    s, wit = unravel_to_simple(S("x := arrow a {x}"))
    assert s == S("x := arrow a {x}") and wit == {"x": "x"}
    for text in ("x := <a> <a> x", "x := p & <a> (x | p)"):
        src = S(text)
        out, wit = unravel_to_simple(src)
        assert classify_system(out).simple
        for seed in range(30):
            m = random_model(seed, 4)
            a = bekic_solve(src, m)
            b = bekic_solve(out, m)
            assert all(a[x] == b[wit[x]] for x in src.bound)


def test_arrow_meet_cases():
    x = Var("x")
    assert arrow_meet("a", [], []) == Arrow("a", ())
    assert arrow_meet("a", [], [x]) == BOT
    assert arrow_meet("a", [x], []) == BOT
    y = Var("y")
    for m in all_models(2, gens=("x", "y")):
        env = {"x": m.gen("x"), "y": m.gen("y")}
        lhs = eval_term(m, And(Arrow("a", (x,)), Arrow("a", (y,))), env)
        assert lhs == eval_term(m, arrow_meet("a", [x], [y]), env)


def test_powerset_translation_single_variable_is_renaming():
    tr = powerset_translate(S("x := arrow a {x}"))
    assert tr.target.bound == ("x",)
    assert classify_system(tr.target).disjunctive_simple


@given(seeds, seeds)
def test_powerset_translation_commutes(seed, mseed):
    s = random_simple_system(random.Random(seed), 3)
    tr = powerset_translate(s)
    assert classify_system(tr.target).disjunctive_simple
    m = random_model(mseed, 3)
    assert transfer_check(tr, m, None, 12)
    sol = bekic_solve(tr.target, m)
    assert tr.project(sol) == bekic_solve(s, m)


def test_compile_examples(m1):
    c = compile_sigma1(P("p"))
    assert c.system == S("free: y_p\nx := y_p") and c.designated == "x"
    c = compile_sigma1(P("<a> q"))
    assert c.system == S("bound: x x1 x2\nfree: y_q\nx := arrow a {x1, x2}\nx1 := y_q\nx2 := T")
    c = compile_sigma1(P("mu y . p | <a> y"))
    assert c.system.equations[0] == ("y", Var("x"))
    assert c.value(m1) == eval_term(m1, P("mu y . p | <a> y"))


@given(seeds, seeds)
def test_compiled_system_computes_the_term(seed, mseed):
    t = guard(random_term(random.Random(seed), 4, kind="sigma1"))
    c = compile_sigma1(t)
    assert classify_system(c.system).elementary
    m = random_model(mseed, 4)
    assert c.value(m) == eval_term(m, t)


def test_regular_harness_examples(m1):
    tr = regular_harness(P("x", ["x", "y"]), P("y", ["x", "y"]), m1, 6)
    assert set(tr.f + tr.g + tr.h + tr.i) == {0}
    assert tr.ok
    tr = regular_harness(P("p | <a> y", ["x", "y"]), P("q | <a> x", ["x", "y"]), m1, 10)
    assert tr.ok


@given(seeds, seeds)
def test_regular_harness_on_random_pairs(seed, mseed):
    rng = random.Random(seed)
    f = random_term(rng, 3, variables=("x", "y"), kind="none")
    g = random_term(rng, 3, variables=("x", "y"), kind="none")
    tr = regular_harness(f, g, random_model(mseed, 4), 10)
    assert tr.ok, tr.verdicts
