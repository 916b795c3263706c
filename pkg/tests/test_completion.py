import itertools
import random

import pytest
from hypothesis import given, strategies as st

from mualg.completion import (
    HYPOTHESIS_FAILURE, PRESERVED, FinitePoset, NotJoinPreserving, PosetAlgebra, check_adjoint,
    check_completion, check_modal_structure, complete_modal_structure, dm_completion, extend_left_adjoint,
    isomorphic, isomorphic_bruteforce, posets_up_to_iso, preservation_check, random_poset,
    term_preserved,
)
from mualg.formats import parse_model, parse_poset
from mualg.generate import random_term
from mualg.kripke import random_model
from mualg.parsing import parse_term

P = parse_term
seeds = st.integers(0, 10**6)


def cuts_by_definition(p):
    """Subsets equal to the lower bounds of their upper bounds, using sets."""
    els = list(p.elements)

    def ub(a):
        return {y for y in els if all(p.le(x, y) for x in a)}

    def lb(a):
        return {y for y in els if all(p.le(y, x) for x in a)}

    out = set()
    for r in range(len(els) + 1):
        for a in itertools.combinations(els, r):
            if lb(ub(a)) == set(a):
                out.add(frozenset(a))
    return out


def as_sets(c):
    return {frozenset(c.poset.members(x)) for x in c.cuts}


def test_antichain_completes_to_a_square():
    c = dm_completion(parse_poset("elem: a b"))
    assert [c.label(x) for x in c.cuts] == ["{}", "{a}", "{b}", "{a,b}"]
    square = parse_poset("elem: 0 a b 1\nleq: 0<a<1 0<b<1")
    assert isomorphic(c.as_poset(), square)


def test_lattices_complete_to_themselves():
    for text in ("elem: 0 a b 1\nleq: 0<a<1 0<b<1", "elem: x y z\nleq: x<y<z", "elem: t"):
        p = parse_poset(text)
        assert isomorphic(dm_completion(p).as_poset(), p)


def test_empty_poset_has_one_cut():
    c = dm_completion(parse_poset(""))
    assert len(c) == 1


@given(seeds)
def test_completion_matches_cut_definition(seed):
    p = random_poset(random.Random(seed), 7)
    c = dm_completion(p)
    assert as_sets(c) == cuts_by_definition(p)
    assert check_completion(c).ok


def test_poset_counts_up_to_isomorphism():
    # 1, 1, 2, 5, 16, 63 unlabeled posets on 0..5 points
    assert [len(posets_up_to_iso(n)) for n in range(6)] == [1, 1, 2, 5, 16, 63]
    ps = posets_up_to_iso(4)
    for a, b in itertools.combinations(ps, 2):
        assert not isomorphic_bruteforce(a, b)


@given(seeds)
def test_isomorphism_routes_agree(seed):
    rng = random.Random(seed)
    p, q = random_poset(rng, 5), random_poset(rng, 5)
    assert isomorphic(p, q) == isomorphic_bruteforce(p, q)
    perm = list(p.elements)
    rng.shuffle(perm)
    ren = dict(zip(p.elements, perm))
    r = FinitePoset([ren[x] for x in p.elements],
                    [(ren[a], ren[b]) for a in p.elements for b in p.elements if p.le(a, b)])
    assert isomorphic(p, r)


def right_adjoint_search(c, fext, b):
    """Largest cut a with f(a) <= b, by scanning all cuts."""
    cands = [a for a in c.cuts if fext[a] & ~b == 0]
    top = [a for a in cands if all(x & ~a == 0 for x in cands)]
    return top[0] if top else None


def test_adjoint_extension_examples():
    p = parse_poset("elem: a b")
    e = extend_left_adjoint(p, {"a": "a", "b": "b"})
    assert all(e.f(x) == x and e.g(x) == x for x in e.lattice.cuts)
    # swapping the antichain is join preserving; check all 16 pairs
    e = extend_left_adjoint(p, {"a": "b", "b": "a"})
    c = e.lattice
    for a in c.cuts:
        for b in c.cuts:
            assert c.leq(e.f(a), b) == c.leq(a, e.g(b))
    for b in c.cuts:
        assert e.g(b) == right_adjoint_search(c, e.ext, b)


def test_diamond_of_a_model_extends_to_itself():
    m = parse_model("states: s0 s1\nrel a: s0->s1 s1->s0")
    base = PosetAlgebra.from_model(m)
    f = {x: m.dia("a", x) for x in m.elements()}
    e = extend_left_adjoint(base.poset, f)
    c = e.lattice
    for x in m.elements():
        assert e.f(c.iota(x)) == c.iota(f[x])
    assert check_adjoint(e).ok


def test_non_join_preserving_map_is_rejected():
    p = parse_poset("elem: 0 a b 1\nleq: 0<a<1 0<b<1")
    with pytest.raises(NotJoinPreserving):
        extend_left_adjoint(p, {"0": "0", "a": "a", "b": "b", "1": "a"})


@given(seeds)
def test_adjoint_extension_on_random_posets(seed):
    rng = random.Random(seed)
    p = random_poset(rng, 6)
    els = list(p.elements)
    for _ in range(30):
        f = {x: rng.choice(els) for x in els}
        try:
            e = extend_left_adjoint(p, f)
        except NotJoinPreserving:
            continue
        rep = check_adjoint(e)
        assert rep.ok
        for b in e.lattice.cuts:
            assert e.g(b) == right_adjoint_search(e.lattice, e.ext, b)


def test_modal_structure_examples():
    one = PosetAlgebra.from_model(parse_model("states: s0\nval p: s0"))
    assert len(complete_modal_structure(one).cuts) == 2
    full = parse_model("states: s0 s1\nrel a: s0->s0 s0->s1 s1->s0 s1->s1")
    cm = complete_modal_structure(PosetAlgebra.from_model(full))
    assert len(cm.cuts) == 4
    assert check_modal_structure(cm).ok


def test_preservation_examples():
    m = parse_model("states: s0 s1 s2\nrel a: s0->s1 s1->s2\nval p: s2")
    base = PosetAlgebra.from_model(m)
    cm = complete_modal_structure(base)
    r = preservation_check(base, cm, P("p"), "x")
    assert r.verdict == PRESERVED and r.stages == 2
    assert preservation_check(base, cm, P("p | <a> x", ["x"]), "x").ok
    anti = PosetAlgebra(parse_poset("elem: a b"), {}, {"p": "a", "q": "b"})
    r = preservation_check(anti, complete_modal_structure(anti), P("p | q"), "x")
    assert r.verdict == HYPOTHESIS_FAILURE


@given(seeds, seeds)
def test_closed_terms_preserved_through_the_embedding(seed, mseed):
    t = random_term(random.Random(seed), 3, kind=random.Random(seed).choice(["sigma1", "pi1"]))
    base = PosetAlgebra.from_model(random_model(mseed, 3))
    assert term_preserved(base, complete_modal_structure(base), t)
