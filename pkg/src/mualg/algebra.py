"""Generic term evaluation over any finite modal algebra.

An algebra is any object offering ``top``, ``bot``, ``meet``, ``join``,
``dia(act, a)``, ``box(act, a)``, ``gen(name)`` and ``literal(name,
positive)``.  Boolean algebras also offer ``neg``.  Values must compare
with ``==``; least and greatest fixed points are reached by plain
iteration, which terminates because every carrier used here is finite.
"""
from __future__ import annotations

from typing import Callable, Mapping

from .terms import (
    And, Arrow, Box, Dia, Gen, Mu, Not, Nu, Or, Term, Var, _Bot, _Top,
)


class EvalError(ValueError):
    pass


def iterate(step: Callable, start, limit: int = 1_000_000) -> list:
    """Return ``[start, step(start), ...]`` up to and including the first repeat."""
    seq = [start]
    cur = start
    for _ in range(limit):
        nxt = step(cur)
        seq.append(nxt)
        if nxt == cur:
            return seq
        cur = nxt
    raise EvalError("iteration did not stabilize")


def lfp(step: Callable, bot):
    return iterate(step, bot)[-1]


def evaluate(alg, t: Term, env: Mapping[str, object] | None = None):
    return _ev(alg, t, dict(env or {}))


def _ev(alg, t: Term, env: dict):
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise EvalError(f"unbound variable {t.name!r}") from None
    if isinstance(t, Gen):
        return alg.gen(t.name)
    if isinstance(t, _Top):
        return alg.top
    if isinstance(t, _Bot):
        return alg.bot
    if isinstance(t, And):
        return alg.meet(_ev(alg, t.left, env), _ev(alg, t.right, env))
    if isinstance(t, Or):
        return alg.join(_ev(alg, t.left, env), _ev(alg, t.right, env))
    if isinstance(t, Not):
        if isinstance(t.body, Gen):
            return alg.literal(t.body.name, False)
        return alg.neg(_ev(alg, t.body, env))
    if isinstance(t, Dia):
        return alg.dia(t.act, _ev(alg, t.body, env))
    if isinstance(t, Box):
        return alg.box(t.act, _ev(alg, t.body, env))
    if isinstance(t, Arrow):
        vals = [_ev(alg, b, env) for b in t.bodies]
        acc = alg.bot
        for v in vals:
            acc = alg.join(acc, v)
        out = alg.box(t.act, acc)
        for v in vals:
            out = alg.meet(out, alg.dia(t.act, v))
        return out
    if isinstance(t, (Mu, Nu)):
        start = alg.bot if isinstance(t, Mu) else alg.top

        def step(x, var=t.var, body=t.body):
            inner = dict(env)
            inner[var] = x
            return _ev(alg, body, inner)

        return lfp(step, start)
    raise TypeError(f"not a term: {t!r}")
