"""Reference implementations kept deliberately naive: sets of state
indices, relations as pair lists, fixed points by plain iteration."""
from mualg.terms import And, Arrow, Box, Dia, Gen, Mu, Not, Nu, Or, Var, _Bot, _Top


def set_eval(m, t, env=None):
    """Evaluate on a KripkeModel through its edge lists only."""
    env = dict(env or {})
    states = frozenset(range(m.n))
    rel = {a: set(m.edges(a)) for a in m.actions}

    def pre(act, z):
        return frozenset(s for s, u in rel.get(act, ()) if u in z)

    def nec(act, z):
        return frozenset(s for s in states if all(u in z for (v, u) in rel.get(act, ()) if v == s))

    def ev(u, env):
        if isinstance(u, _Top):
            return states
        if isinstance(u, _Bot):
            return frozenset()
        if isinstance(u, (Gen, Var)):
            # free variables read the valuation like generators
            if u.name in env:
                return env[u.name]
            mask = m.valuation.get(u.name, 0)
            return frozenset(i for i in states if mask >> i & 1)
        if isinstance(u, Not):
            return states - ev(u.body, env)
        if isinstance(u, And):
            return ev(u.left, env) & ev(u.right, env)
        if isinstance(u, Or):
            return ev(u.left, env) | ev(u.right, env)
        if isinstance(u, Dia):
            return pre(u.act, ev(u.body, env))
        if isinstance(u, Box):
            return nec(u.act, ev(u.body, env))
        if isinstance(u, Arrow):
            xs = [ev(b, env) for b in u.bodies]
            out = nec(u.act, frozenset().union(*xs))
            for x in xs:
                out &= pre(u.act, x)
            return out
        if isinstance(u, (Mu, Nu)):
            cur = frozenset() if isinstance(u, Mu) else states
            while True:
                nxt = ev(u.body, {**env, u.var: cur})
                if nxt == cur:
                    return cur
                cur = nxt
        raise TypeError(u)

    return ev(t, {k: frozenset(i for i in states if v >> i & 1) for k, v in env.items()})


def to_mask(s):
    return sum(1 << i for i in s)


def all_models(max_states, acts=("a",), gens=("p",)):
    """Every Kripke model up to the given size, by brute enumeration."""
    from itertools import product

    from mualg.kripke import KripkeModel
    for n in range(1, max_states + 1):
        pairs = [(i, j) for i in range(n) for j in range(n)]
        for bits in product((0, 1), repeat=len(pairs) * len(acts)):
            edges = {a: [pairs[k] for k in range(len(pairs)) if bits[i * len(pairs) + k]]
                     for i, a in enumerate(acts)}
            for vals in product(range(1 << n), repeat=len(gens)):
                yield KripkeModel.from_edges(n, edges, dict(zip(gens, vals)))
