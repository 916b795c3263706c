import random

import pytest
from hypothesis import given, strategies as st

from mualg.formats import (
    FormatError, parse_model, parse_poset, parse_system, print_model, print_poset, print_system,
)
from mualg.generate import random_system
from mualg.kripke import random_model

from conftest import M1_TEXT


def test_m1_document(m1):
    assert m1.n == 2 and m1.actions == ("a",)
    assert sorted(m1.edges("a")) == [(0, 1), (1, 1)]
    assert m1.gen("p") == 0b10
    assert parse_model(print_model(m1)).signature() == m1.signature()
    assert print_model(m1).splitlines()[0] == "states: s0 s1"
    assert M1_TEXT.splitlines()[0] == "states: s0 s1"


@pytest.mark.parametrize("text, line", [
    ("states: s0\nactions: a\nrel b: s0->s0", 3),
    ("states: s0\nrel a: s0->s9", 2),
    ("states: s0\nfoo: s0", 2),
    ("val p: s0\nstates: s0", 1),
    ("states: s0\nval p: s0\nrel a: s0->s0", 3),
    ("states: s0 s0", 1),
    ("states: s0\nrel a: s0s0", 2),
])
def test_model_errors_carry_line_numbers(text, line):
    with pytest.raises(FormatError) as err:
        parse_model(text)
    assert err.value.line == line


def test_empty_state_list_is_accepted():
    m = parse_model("states:")
    assert m.n == 0 and list(m.elements()) == [0]


@given(st.integers(0, 10**6))
def test_model_round_trip(seed):
    m = random_model(seed, 5, actions=("a", "b"))
    assert parse_model(print_model(m)).signature() == m.signature()


def test_system_document():
    s = parse_system("# comment\nbound: x y\nfree: z\nx := p | <a> y\ny := z & [a] x\n")
    assert s.bound == ("x", "y") and s.free == ("z",)
    assert parse_system(print_system(s)) == s


@pytest.mark.parametrize("text", [
    "x := p\nx := q",
    "bound: x y\nx := p",
    "bound: x\nx := p\ny := q",
    "x := p &",
    "x := ~x",
    "x := p\nbound: x",
])
def test_system_errors(text):
    with pytest.raises(FormatError):
        parse_system(text)


@given(st.integers(0, 10**6))
def test_system_round_trip(seed):
    s = random_system(random.Random(seed), 3, 3)
    assert parse_system(print_system(s)) == s


def test_poset_document():
    p = parse_poset("elem: a b c\nleq: a<b<c")
    assert p.le("a", "c") and not p.le("c", "a")
    assert print_poset(p) == "elem: a b c\nleq: a<b b<c"
    with pytest.raises(FormatError):
        parse_poset("elem: a b\nleq: a<b b<a")
    with pytest.raises(FormatError):
        parse_poset("leq: a<b")
