"""The successor map on omega+1 and its power modulo cofinite agreement.

Elements of omega+1 carry ``f(k) = k+1`` and ``f(omega) = omega``.  In the
power ``A^omega / ~`` the sequences ``phi_n`` (``i -> f^(i-n)(0)`` past
``n``, zero before) form a descending chain with ``f(phi_n) ~ phi_(n-1)``
while the least fixed point ``omega`` stays above none of them.  Only the
representable fragment is modelled: constants and shifted chains, each
with finitely many overridden coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


@dataclass(frozen=True)
class OrdElem:
    """``Nat(k)`` when ``k`` is an int, ``Omega`` when ``k`` is None."""
    k: int | None

    def __post_init__(self):
        if self.k is not None and self.k < 0:
            raise ValueError("naturals only")

    @property
    def is_omega(self) -> bool:
        return self.k is None

    def __le__(self, other: "OrdElem") -> bool:
        if other.k is None:
            return True
        if self.k is None:
            return False
        return self.k <= other.k

    def __lt__(self, other: "OrdElem") -> bool:
        return self <= other and self != other

    def __str__(self):
        return "omega" if self.k is None else str(self.k)


def Nat(k: int) -> OrdElem:
    return OrdElem(k)


OMEGA = OrdElem(None)
ZERO = Nat(0)


def ord_f(a: OrdElem) -> OrdElem:
    return a if a.is_omega else Nat(a.k + 1)


def ord_approximants(n: int) -> list[OrdElem]:
    """``bot, f(bot), ..., f^n(bot)``."""
    out = [ZERO]
    for _ in range(n):
        out.append(ord_f(out[-1]))
    return out


@dataclass(frozen=True)
class QuotSeq:
    """Either the constant sequence ``const`` or the shifted chain
    ``i -> Nat(max(i - shift, 0))``, patched at finitely many coordinates."""
    const: OrdElem | None = None
    shift: int | None = None
    overrides: tuple = ()

    def __post_init__(self):
        if (self.const is None) == (self.shift is None):
            raise ValueError("exactly one of const and shift")

    def base(self, i: int) -> OrdElem:
        if self.const is not None:
            return self.const
        return Nat(max(i - self.shift, 0))

    def at(self, i: int) -> OrdElem:
        for j, v in self.overrides:
            if j == i:
                return v
        return self.base(i)

    def tail_start(self) -> int:
        """First coordinate past every override."""
        return max((j + 1 for j, _ in self.overrides), default=0)

    def __str__(self):
        head = f"const({self.const})" if self.const is not None else f"shifted({self.shift})"
        if self.overrides:
            head += " with " + ", ".join(f"{j}:{v}" for j, v in self.overrides)
        return head


def _canon(const, shift, overrides: dict) -> QuotSeq:
    probe = QuotSeq(const, shift)
    kept = tuple(sorted((j, v) for j, v in overrides.items() if v != probe.base(j)))
    return QuotSeq(const, shift, kept)


def Const(a: OrdElem, overrides: dict | None = None) -> QuotSeq:
    return _canon(a, None, overrides or {})


def Shifted(n: int, overrides: dict | None = None) -> QuotSeq:
    """``phi_n``; a negative ``n`` starts the chain above zero."""
    return _canon(None, n, overrides or {})


MU = Const(OMEGA)


def quot_apply_f(s: QuotSeq) -> QuotSeq:
    """Pointwise successor.  On a shifted chain the zero prefix before the
    shift is sent to one, so ``f(phi_n) = phi_(n-1)`` patched at ``0..n-1``."""
    over = {j: ord_f(v) for j, v in s.overrides}
    if s.const is not None:
        return _canon(ord_f(s.const), None, over)
    for i in range(0, s.shift):
        over.setdefault(i, ord_f(ZERO))
    return _canon(None, s.shift - 1, over)


def _tail_leq(a: QuotSeq, b: QuotSeq) -> bool:
    if a.const is not None and b.const is not None:
        return a.const <= b.const
    if a.const is not None:
        # a constant lies eventually below an unbounded chain unless it is omega
        return not a.const.is_omega
    if b.const is not None:
        return b.const.is_omega
    # Nat(i - n) <= Nat(i - m) for large i iff m <= n
    return b.shift <= a.shift


def quot_leq(a: QuotSeq, b: QuotSeq) -> bool:
    """Order of the quotient: pointwise below at all but finitely many
    coordinates, so overrides never matter."""
    return _tail_leq(a, b)


def sim(a: QuotSeq, b: QuotSeq) -> bool:
    """Agreement at cofinitely many coordinates."""
    if a.const is not None or b.const is not None:
        return a.const == b.const and a.shift == b.shift
    return a.shift == b.shift


def threshold(*seqs: QuotSeq, extra: int = 0) -> int:
    """A coordinate past which every sequence follows its tail pattern and
    the tail comparisons are already decided."""
    t = extra
    for s in seqs:
        t = max(t, s.tail_start())
        if s.shift is not None:
            t = max(t, s.shift + 1)
        if s.const is not None and not s.const.is_omega:
            t = max(t, s.const.k)
    for s in seqs:
        if s.shift is not None:
            for r in seqs:
                if r.const is not None and not r.const.is_omega:
                    t = max(t, r.const.k + s.shift + 1)
    return t


def exceptions(a: QuotSeq, b: QuotSeq, rel=lambda x, y: x <= y) -> list[int]:
    """Coordinates below the threshold where ``rel`` fails pointwise."""
    return [i for i in range(threshold(a, b)) if not rel(a.at(i), b.at(i))]


def pointwise_leq_window(a: QuotSeq, b: QuotSeq, start: int, width: int = 64) -> bool:
    return all(a.at(i) <= b.at(i) for i in range(start, start + width))


# -- the blocking configuration --------------------------------------------------

@dataclass
class Relation:
    name: str
    holds: bool
    expected: bool
    justification: str

    @property
    def ok(self) -> bool:
        return self.holds == self.expected


@dataclass
class WrongConfReport:
    n_max: int
    relations: list = field(default_factory=list)
    bounds: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.relations) and all(r.ok for b in self.bounds for r in b)

    def lines(self) -> list[str]:
        out = []
        for r in self.relations + [r for b in self.bounds for r in b]:
            out.append(f"{'ok' if r.ok else 'FAIL'}\t{r.name}\t{r.holds}\t{r.justification}")
        return out

    def __str__(self):
        return "\n".join(self.lines())


def _why_leq(a: QuotSeq, b: QuotSeq) -> str:
    t = threshold(a, b)
    bad = exceptions(a, b)
    return f"tails compared from coordinate {t}; pointwise exceptions below it: {len(bad)}"


def _why_sim(a: QuotSeq, b: QuotSeq) -> str:
    t = threshold(a, b)
    bad = exceptions(a, b, lambda x, y: x == y)
    return f"agree from coordinate {t}; disagreements below it: {len(bad)}"


def is_lower_bound(l: QuotSeq, n_max: int) -> tuple[bool, int | None]:
    """Whether ``l`` lies below every ``phi_n``; the first failing ``n``
    otherwise.  Decided from the tail: a constant below omega is below
    every chain, a chain ``phi_m`` fails at ``m + 1``."""
    if l.const is not None:
        return (True, None) if not l.const.is_omega else (False, 0)
    for n in range(max(n_max, l.shift + 1) + 1):
        if not quot_leq(l, Shifted(n)):
            return False, n
    return True, None


def wrongconf_verify(n_max: int = 100, lower_bounds: Iterable[QuotSeq] = ()) -> WrongConfReport:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    rep = WrongConfReport(n_max)
    for n in range(1, n_max + 1):
        fa = quot_apply_f(Shifted(n))
        rep.relations.append(Relation(f"f(phi_{n}) ~ phi_{n - 1}", sim(fa, Shifted(n - 1)), True,
                                      _why_sim(fa, Shifted(n - 1))))
        rep.relations.append(Relation(f"f(phi_{n}) <= phi_{n - 1}", quot_leq(fa, Shifted(n - 1)), True,
                                      _why_leq(fa, Shifted(n - 1))))
        rep.relations.append(Relation(f"phi_{n + 1} <= phi_{n}", quot_leq(Shifted(n + 1), Shifted(n)), True,
                                      _why_leq(Shifted(n + 1), Shifted(n))))
    rep.relations.append(Relation("mu <= phi_0", quot_leq(MU, Shifted(0)), False,
                                  "omega above every natural at every coordinate"))
    for l in lower_bounds:
        rep.bounds.append(_replay(l, n_max))
    return rep


def _replay(l: QuotSeq, n_max: int) -> list[Relation]:
    """Replay the argument that a meet of the chain would be a prefixed
    point of ``f`` and hence lie above ``mu``."""
    out = []
    lb, fail = is_lower_bound(l, n_max)
    out.append(Relation(f"{l} lower bound of all phi_n", lb, lb,
                        "constant below omega" if lb else f"fails at phi_{fail}"))
    if not lb:
        if quot_leq(MU, l):
            out.append(Relation(f"mu <= {l} forces mu <= phi_0", quot_leq(MU, Shifted(0)), False,
                                "contradiction: mu is not below phi_0"))
        return out
    fl = quot_apply_f(l)
    flb, _ = is_lower_bound(fl, n_max)
    out.append(Relation(f"f({l}) lower bound of all phi_n", flb, True,
                        "f(l) <= f(phi_(n+1)) ~ phi_n"))
    pre = quot_leq(fl, l)
    out.append(Relation(f"f({l}) <= {l}", pre, pre,
                        "prefixed" if pre else "f(l) is a strictly larger lower bound, so l is not the meet"))
    if pre:
        out.append(Relation(f"mu <= {l}", quot_leq(MU, l), True, "least prefixed point"))
        out.append(Relation("mu <= phi_0", quot_leq(MU, Shifted(0)), False,
                            "contradiction: mu is not below phi_0"))
    return out
