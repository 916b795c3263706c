from hypothesis import given, strategies as st

from mualg.counterexample import (
    MU, OMEGA, Const, Nat, Shifted, exceptions, ord_approximants, ord_f, quot_apply_f, quot_leq,
    sim, wrongconf_verify,
)

small = st.integers(0, 60)


def coords(s, width=200):
    return [s.at(i) for i in range(width)]


def eventually(pred, a, b, start, width=200):
    """Pointwise check on a window past every override."""
    return all(pred(x, y) for x, y in zip(coords(a, width)[start:], coords(b, width)[start:]))


def test_successor_fixes_omega():
    assert ord_f(OMEGA) == OMEGA
    assert quot_apply_f(MU) == MU
    assert ord_approximants(3) == [Nat(0), Nat(1), Nat(2), Nat(3)]


@given(st.integers(1, 60))
def test_successor_on_the_chain_shifts_by_one(n):
    fa = quot_apply_f(Shifted(n))
    assert sim(fa, Shifted(n - 1))
    assert quot_leq(fa, Shifted(n - 1))
    assert eventually(lambda x, y: x == y, fa, Shifted(n - 1), n + 1)


def test_successor_of_first_chain_is_strictly_above():
    fa = quot_apply_f(Shifted(0))
    assert all(fa.at(i) == Nat(i + 1) for i in range(100))
    assert quot_leq(Shifted(0), fa) and not sim(fa, Shifted(0))


def test_order_examples():
    assert quot_leq(Shifted(2), Shifted(1))
    assert not quot_leq(MU, Shifted(0))
    assert all(quot_leq(Const(Nat(0)), s) for s in (MU, Shifted(0), Shifted(9), Const(Nat(5))))


@given(small, small)
def test_order_agrees_with_tail_window(n, k):
    a, b = Shifted(n), Shifted(k)
    start = max(n, k) + 1
    assert quot_leq(a, b) == eventually(lambda x, y: x <= y, a, b, start)
    assert sim(a, b) == (n == k)


def test_exceptions_are_finite_and_listed():
    fa = quot_apply_f(Shifted(5))
    assert exceptions(fa, Shifted(4), lambda x, y: x == y) == [0, 1, 2, 3, 4]


def test_verification_report():
    rep = wrongconf_verify(100, [Const(Nat(0)), MU])
    assert rep.ok
    names = [r.name for r in rep.relations]
    assert "f(phi_1) ~ phi_0" in names and "phi_101 <= phi_100" in names
    last = rep.relations[-1]
    assert last.name == "mu <= phi_0" and last.holds is False
    zero, mu = rep.bounds
    assert zero[0].holds is True
    assert mu[0].holds is False and "phi_0" in mu[0].justification


def test_report_lines_are_tab_separated():
    for line in wrongconf_verify(3).lines():
        assert line.count("\t") == 3 and line.startswith("ok")
