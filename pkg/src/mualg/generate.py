"""Seeded random generators for terms, systems, specs and clauses."""
from __future__ import annotations

import random

from .normal import Clause, SpconSpec
from .systems import System
from .terms import BOT, TOP, And, Arrow, Box, Dia, Gen, Mu, Not, Nu, Or, Term, Var, disj

GENS = ("p", "q")
ACTS = ("a",)


def random_literal(rng: random.Random, gens=GENS) -> Term:
    g = Gen(rng.choice(gens))
    return g if rng.random() < 0.6 else Not(g)


def random_term(rng: random.Random, depth: int = 3, gens=GENS, acts=ACTS, variables=(),
                kind: str = "general", arrows: bool = False) -> Term:
    """Negation only on generators, so every bound variable is positive.
    ``kind`` picks the binders: ``sigma1`` only least, ``pi1`` only
    greatest, ``general`` both, ``none`` no binders."""
    variables = tuple(variables)
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if variables and r < 0.4:
            return Var(rng.choice(variables))
        if r < 0.5:
            return rng.choice((TOP, BOT))
        return random_literal(rng, gens)
    ops = ["and", "or", "dia", "box"]
    if arrows:
        ops.append("arrow")
    if kind in ("sigma1", "general"):
        ops.append("mu")
    if kind in ("pi1", "general"):
        ops.append("nu")
    op = rng.choice(ops)
    sub = lambda vs=variables: random_term(rng, depth - 1, gens, acts, vs, kind, arrows)
    if op == "and":
        return And(sub(), sub())
    if op == "or":
        return Or(sub(), sub())
    if op == "dia":
        return Dia(rng.choice(acts), sub())
    if op == "box":
        return Box(rng.choice(acts), sub())
    if op == "arrow":
        return Arrow(rng.choice(acts), tuple(sub() for _ in range(rng.randint(0, 2))))
    name = f"v{len(variables)}"
    body = sub(variables + (name,))
    return Mu(name, body) if op == "mu" else Nu(name, body)


def random_system(rng: random.Random, max_bound: int = 3, depth: int = 4, gens=GENS, acts=ACTS,
                  kind: str = "sigma1") -> System:
    n = rng.randint(1, max_bound)
    xs = [f"x{i}" for i in range(n)]
    eqs = {x: random_term(rng, depth, gens, acts, xs, kind) for x in xs}
    return System.make(eqs)


def _var_join(rng, xs) -> Term:
    k = rng.randint(0, min(2, len(xs)))
    return disj(Var(x) for x in rng.sample(xs, k)) if k else BOT


def random_simple_system(rng: random.Random, max_bound: int = 3, gens=GENS, acts=ACTS) -> System:
    """Right-hand sides are lattice combinations of literals and arrows
    whose arguments are joins of bound variables."""
    n = rng.randint(1, max_bound)
    xs = [f"x{i}" for i in range(n)]

    def atom():
        r = rng.random()
        if r < 0.25:
            return random_literal(rng, gens)
        if r < 0.3:
            return rng.choice((TOP, BOT))
        return Arrow(rng.choice(acts), tuple(_var_join(rng, xs) for _ in range(rng.randint(0, 2))))

    def rhs(d):
        if d == 0 or rng.random() < 0.3:
            return atom()
        return (And if rng.random() < 0.5 else Or)(rhs(d - 1), rhs(d - 1))

    return System.make({x: rhs(2) for x in xs})


def random_spec(rng: random.Random, gens=GENS, acts=ACTS, max_block: int = 2) -> SpconSpec:
    lits = {random_literal(rng, gens) for _ in range(rng.randint(0, 2))}
    blocks = {}
    k = 0
    for a in acts:
        if rng.random() < 0.8 or not blocks:
            size = rng.randint(1, max_block)
            blocks[a] = [f"y{k + i}" for i in range(size)]
            k += size
    return SpconSpec.make(sorted(lits, key=str), blocks)


def random_clause(rng: random.Random, gens=GENS, acts=ACTS) -> Clause:
    lits = {random_literal(rng, gens) for _ in range(rng.randint(0, 2))}
    dia = {}
    boxes = {}
    for a in acts:
        if rng.random() < 0.6:
            dia[a] = random_term(rng, 1, gens, acts, kind="none")
        if rng.random() < 0.6:
            boxes[a] = [random_term(rng, 1, gens, acts, kind="none") for _ in range(rng.randint(1, 2))]
    return Clause.make(lits, dia, boxes)


def random_clause_term(rng: random.Random, gens=GENS, acts=ACTS) -> Term:
    return random_clause(rng, gens, acts).to_term()


def random_descriptor(rng: random.Random, arity: int, depth: int, const, acts=ACTS, gens=GENS,
                      allow_mu: bool = True, allow_spcon: bool = True):
    """Scalar descriptor of the given arity built from the cover calculus;
    ``const(rng)`` supplies backend constants."""
    from .covers import Const, ConstMeet, DiaOp, Join, ParamMu, Proj, SpconOp, compose
    if depth <= 0 or rng.random() < 0.2:
        if arity and rng.random() < 0.85:
            return Proj(rng.randrange(arity), arity)
        return Const(const(rng), arity)
    ops = ["join", "dia", "meet"]
    if allow_spcon:
        ops.append("spcon")
    if allow_mu:
        ops.append("mu")
    op = rng.choice(ops)

    def sub(n=arity):
        return random_descriptor(rng, n, depth - 1, const, acts, gens, allow_mu, allow_spcon)

    if op == "join":
        return compose(Join(2), sub(), sub())
    if op == "dia":
        return compose(DiaOp(rng.choice(acts)), sub())
    if op == "meet":
        return compose(ConstMeet(const(rng)), sub())
    if op == "spcon":
        spec = random_spec(rng, gens, acts, max_block=2)
        return compose(SpconOp(spec), *[sub() for _ in range(spec.arity)])
    return ParamMu(sub(arity + 1))
