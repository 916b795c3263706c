"""Line-based text formats for models, systems and posets."""
from __future__ import annotations

import re

from .completion import FinitePoset, PosetError
from .kripke import KripkeModel
from .parsing import TermSyntaxError, parse_term
from .systems import System, SystemError_


class FormatError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


_NAME = re.compile(r"[A-Za-z0-9_']+$")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _directive(no: int, line: str) -> tuple[str, str | None, str]:
    if ":" not in line:
        raise FormatError(no, f"expected a directive, got {line!r}")
    head, rest = line.split(":", 1)
    parts = head.split()
    if not parts or len(parts) > 2:
        raise FormatError(no, f"bad directive {head!r}")
    return parts[0], parts[1] if len(parts) == 2 else None, rest.strip()


def _names(no: int, text: str) -> list[str]:
    out = text.split()
    for n in out:
        if not _NAME.match(n):
            raise FormatError(no, f"bad name {n!r}")
    return out


# -- models ------------------------------------------------------------------

_MODEL_ORDER = {"states": 0, "actions": 1, "rel": 2, "val": 3}


def parse_model(text: str) -> KripkeModel:
    """``states: s0 s1`` then optional ``actions: a b``, then ``rel a:
    s0->s1 ...`` lines, then ``val p: s0 ...`` lines."""
    states = None
    alphabet = None
    rels: dict[str, list] = {}
    val: dict[str, list] = {}
    stage = -1
    for no, line in _lines(text):
        kind, arg, rest = _directive(no, line)
        if kind not in _MODEL_ORDER:
            raise FormatError(no, f"unknown directive {kind!r}")
        order = _MODEL_ORDER[kind]
        if order < stage or (order == stage and kind in ("states", "actions")):
            raise FormatError(no, f"directive {kind!r} out of order")
        stage = order
        if kind == "states":
            if arg:
                raise FormatError(no, "states takes no argument")
            states = _names(no, rest)
            if len(set(states)) != len(states):
                raise FormatError(no, "duplicate state")
            continue
        if states is None:
            raise FormatError(no, "states must come first")
        if kind == "actions":
            alphabet = _names(no, rest)
        elif kind == "rel":
            if not arg:
                raise FormatError(no, "rel needs an action")
            if alphabet is not None and arg not in alphabet:
                raise FormatError(no, f"undeclared action {arg!r}")
            if arg in rels:
                raise FormatError(no, f"action {arg!r} listed twice")
            pairs = []
            for edge in rest.split():
                if "->" not in edge:
                    raise FormatError(no, f"bad edge {edge!r}")
                s, t = edge.split("->", 1)
                for u in (s, t):
                    if u not in states:
                        raise FormatError(no, f"unknown state {u!r}")
                pairs.append((s, t))
            rels[arg] = pairs
        else:
            if not arg:
                raise FormatError(no, "val needs a generator")
            if arg in val:
                raise FormatError(no, f"generator {arg!r} listed twice")
            ss = _names(no, rest)
            for u in ss:
                if u not in states:
                    raise FormatError(no, f"unknown state {u!r}")
            val[arg] = ss
    if states is None:
        raise FormatError(0, "missing states line")
    acts = alphabet if alphabet is not None else list(rels)
    return KripkeModel(states, rels, val, acts)


def print_model(m: KripkeModel) -> str:
    lines = ["states: " + " ".join(m.states)]
    if m.actions:
        lines.append("actions: " + " ".join(sorted(m.actions)))
    names = m.state_names()
    for a in sorted(m.actions):
        es = " ".join(f"{names[s]}->{names[t]}" for s, t in sorted(m.edges(a)))
        lines.append(f"rel {a}: {es}".rstrip())
    for g in sorted(m.valuation):
        lines.append(f"val {g}: {' '.join(sorted(m.names(m.valuation[g]), key=names.index))}".rstrip())
    return "\n".join(lines)


# -- systems -----------------------------------------------------------------

def parse_system(text: str) -> System:
    """``bound: x y`` / ``free: z`` headers, then ``x := term`` lines."""
    bound = None
    free: list[str] = []
    raw: dict[str, tuple[int, str]] = {}
    for no, line in _lines(text):
        if ":=" in line:
            x, rhs = line.split(":=", 1)
            x = x.strip()
            if not _NAME.match(x):
                raise FormatError(no, f"bad variable {x!r}")
            if x in raw:
                raise FormatError(no, f"variable {x!r} defined twice")
            raw[x] = (no, rhs)
            continue
        kind, arg, rest = _directive(no, line)
        if kind in ("bound", "free") and arg is None:
            if raw:
                raise FormatError(no, "headers must precede equations")
            if kind == "bound":
                bound = _names(no, rest)
            else:
                free = _names(no, rest)
        else:
            raise FormatError(no, f"unknown directive {kind!r}")
    order = list(raw)
    if bound is None:
        bound = order
    eqs = {}
    for x, (no, rhs) in raw.items():
        try:
            eqs[x] = parse_term(rhs, variables=bound + free)
        except TermSyntaxError as err:
            raise FormatError(no, str(err)) from None
    missing = [x for x in bound if x not in eqs]
    if missing:
        raise FormatError(0, f"no equation for {missing}")
    extra = [x for x in order if x not in bound]
    if extra:
        raise FormatError(0, f"equation for undeclared variable {extra}")
    try:
        return System.make(eqs, free, bound)
    except SystemError_ as err:
        raise FormatError(0, str(err)) from None


def print_system(s: System) -> str:
    return str(s)


# -- posets --------------------------------------------------------------------

def parse_poset(text: str) -> FinitePoset:
    """``elem: a b c`` then ``leq: a<b b<c`` (closed reflexively and
    transitively)."""
    elems = None
    pairs = []
    for no, line in _lines(text):
        kind, arg, rest = _directive(no, line)
        if arg is not None:
            raise FormatError(no, f"unexpected argument {arg!r}")
        if kind == "elem":
            if elems is not None:
                raise FormatError(no, "elements declared twice")
            elems = _names(no, rest)
        elif kind == "leq":
            if elems is None:
                raise FormatError(no, "elem must come first")
            for item in rest.split():
                chain = item.split("<")
                if len(chain) < 2:
                    raise FormatError(no, f"bad relation {item!r}")
                for u in chain:
                    if u not in elems:
                        raise FormatError(no, f"unknown element {u!r}")
                pairs.extend(zip(chain, chain[1:]))
        else:
            raise FormatError(no, f"unknown directive {kind!r}")
    if elems is None:
        elems = []
    try:
        return FinitePoset.from_relation(elems, pairs)
    except PosetError as err:
        raise FormatError(0, str(err)) from None


def print_poset(p: FinitePoset) -> str:
    g = p.hasse()
    lines = ["elem: " + " ".join(map(str, p.elements))]
    rel = " ".join(f"{p.elements[i]}<{p.elements[j]}" for i, j in sorted(g.edges()))
    if rel:
        lines.append("leq: " + rel)
    return "\n".join(lines)
