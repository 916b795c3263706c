"""Command line front end.

Every subcommand parses its inputs, calls one engine, and prints the result
as tab-separated text.  Exit status: 0 on success, 1 when a check fails,
2 on bad usage or unparsable input.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import plotting
from .algebra import EvalError, evaluate
from .completion import (
    FinitePoset, NotJoinPreserving, PosetAlgebra, PosetError, check_adjoint, check_completion,
    check_modal_structure, complete_modal_structure, dm_completion, dump_completion,
    extend_left_adjoint, preservation_check, term_preserved,
)
from .counterexample import wrongconf_verify
from .covers import (
    FiniteBackend, NoCoverRule, NotFiniteType, ParamMu, SyntacticBackend, automaton_reach, cover,
    cover_graph, descriptor_from_term, format_covers, mu_cover,
)
from .formats import FormatError, parse_model, parse_poset, parse_system, print_model, print_poset
from .kripke import KripkeModel, lfp_iterate, whitman_check
from .normal import classify, fl_closure, guard, modal_cnf, nnf
from .parsing import TermSyntaxError, parse_term
from .printing import print_term
from .suites import SUITES, run_suite
from .systems import (
    SystemError_, bekic_solve, classify_system, compile_sigma1, guard_system, powerset_translate,
    regular_harness, simultaneous_solve, unravel_to_simple,
)
from .terms import Mu, Term, canonical

# engines reject unsuitable input with ValueError subclasses
USAGE_ERRORS = (TermSyntaxError, FormatError, SystemError_, PosetError, NoCoverRule, EvalError,
                ValueError, OSError)


class UsageError(ValueError):
    pass


class Output:
    """Collects report text and figures for one invocation."""

    def __init__(self, args):
        self.out = Path(args.out) if args.out else None
        if args.figures:
            self.fig_dir = Path(args.figures)
        elif self.out is not None:
            self.fig_dir = self.out.parent
        else:
            self.fig_dir = None
        self.stem = self.out.stem if self.out is not None else args.command
        self.chunks: list[str] = []
        self.figures: list[Path] = []

    def write(self, text: str) -> None:
        self.chunks.append(text if text.endswith("\n") else text + "\n")

    def figure(self, name: str, draw, subject, *extra) -> None:
        if self.fig_dir is None:
            return
        self.figures.append(draw(subject, self.fig_dir / f"{self.stem}-{name}.png", *extra))

    def flush(self) -> None:
        text = "".join(self.chunks)
        if self.out is None:
            sys.stdout.write(text)
        else:
            self.out.parent.mkdir(parents=True, exist_ok=True)
            self.out.write_text(text)
        for f in self.figures:
            print(f"figure: {f}", file=sys.stderr)


# -- input helpers -----------------------------------------------------------

def read_input(arg: str) -> str:
    """``-`` is standard input, an existing path is read, anything else is
    taken literally."""
    if arg == "-":
        return sys.stdin.read()
    p = Path(arg)
    if len(arg) < 4096 and p.is_file():
        return p.read_text()
    return arg


def _names(text: str | None) -> list[str]:
    return [x.strip() for x in (text or "").split(",") if x.strip()]


def _term(args, text: str | None = None, variables=()) -> Term:
    return parse_term(read_input(text if text is not None else args.term).strip(), variables)


def _model(args) -> KripkeModel:
    if not args.model:
        raise UsageError("--model is required")
    return parse_model(read_input(args.model))


def _env(m: KripkeModel, lets) -> dict:
    """``--let x=s0,s1`` binds a variable to a set of states."""
    env = {}
    for item in lets or ():
        if "=" not in item:
            raise UsageError(f"--let expects name=states, got {item!r}")
        name, states = item.split("=", 1)
        try:
            env[name.strip()] = m.elem(_names(states))
        except (KeyError, ValueError) as err:
            raise UsageError(f"--let {item!r}: {err}") from None
    return env


def show_states(m: KripkeModel):
    order = {s: i for i, s in enumerate(m.state_names())}
    return lambda z: "{" + ",".join(sorted(m.names(z), key=order.get)) + "}"


def _backend(args):
    if args.model:
        m = _model(args)
        return FiniteBackend(m), (lambda t: evaluate(m, t)), show_states(m)
    return SyntacticBackend(), (lambda t: t), print_term


def _system(args):
    return parse_system(read_input(args.system))


# -- term commands -------------------------------------------------------------

def cmd_parse(args, out):
    t = _term(args, variables=_names(args.vars))
    out.write(print_term(t))


def cmd_print(args, out):
    text = read_input(args.input)
    if args.kind == "term":
        out.write(print_term(canonical(parse_term(text.strip(), _names(args.vars)))))
    elif args.kind == "model":
        out.write(print_model(parse_model(text)))
    elif args.kind == "system":
        out.write(str(parse_system(text)))
    else:
        out.write(print_poset(parse_poset(text)))


def cmd_nnf(args, out):
    out.write(print_term(nnf(_term(args, variables=_names(args.vars)))))


def cmd_guard(args, out):
    if args.system:
        out.write(str(guard_system(_system(args))))
    else:
        out.write(print_term(guard(_term(args, variables=_names(args.vars)))))


def cmd_flclosure(args, out):
    for s in fl_closure(nnf(_term(args))):
        out.write(print_term(s))


def cmd_classify(args, out):
    if args.system:
        out.write("\t".join(classify_system(_system(args)).flags()) or "none")
    else:
        out.write(classify(_term(args, variables=_names(args.vars))))


def cmd_cnf(args, out):
    for c in modal_cnf(nnf(_term(args))):
        out.write(print_term(c.to_term()))


def cmd_eval(args, out):
    m = _model(args)
    env = _env(m, args.let)
    t = _term(args, variables=list(env))
    out.write(show_states(m)(evaluate(m, t, env)))


def cmd_approx(args, out):
    m = _model(args)
    env = _env(m, args.let)
    t = _term(args, variables=list(env))
    if not isinstance(t, Mu):
        raise UsageError("approx expects a term of the form mu x . body")
    tr = lfp_iterate(m, t.body, t.var, env)
    show = show_states(m)
    out.write("stage\tvalue")
    for i, v in enumerate(tr.values):
        out.write(f"{i}\t{show(v)}")
    out.figure("approximants", plotting.plot_trace, tr.values)


def cmd_compile(args, out):
    c = compile_sigma1(_term(args))
    out.write(str(c.system))
    out.write(f"designated: {c.designated}")
    for y, u in c.params.items():
        out.write(f"param {y}: {print_term(u)}")


# -- system commands -----------------------------------------------------------

def cmd_bekic(args, out):
    s = _system(args)
    m = _model(args)
    env = _env(m, args.let)
    show = show_states(m)
    a = bekic_solve(s, m, env)
    b, _ = simultaneous_solve(s, m, env)
    out.write("var\telimination\tsimultaneous")
    for x in s.bound:
        out.write(f"{x}\t{show(a[x])}\t{show(b[x])}")
    return 0 if a == b else 1


def cmd_unravel(args, out):
    s, origin = unravel_to_simple(_system(args))
    out.write(str(s))
    for x, y in origin.items():
        out.write(f"# {x} from {y}")


def cmd_powerset(args, out):
    tr = powerset_translate(_system(args))
    out.write(str(tr.target))


# -- covers ------------------------------------------------------------------

def _descriptor(args, const):
    coords = _names(args.coords)
    if not coords:
        raise UsageError("--coords must name at least one coordinate")
    t = _term(args, variables=coords)
    return descriptor_from_term(t, coords, const), coords


def _target(args, const):
    return const(parse_term(read_input(args.at).strip()))


def cmd_covers(args, out):
    be, const, show = _backend(args)
    d, coords = _descriptor(args, const)
    out.write("\t".join(coords))
    out.write(format_covers(cover(d, _target(args, const), be, args.budget or 4096), show))


def cmd_mucover(args, out):
    be, const, show = _backend(args)
    d, coords = _descriptor(args, const)
    if not isinstance(d, ParamMu):
        raise UsageError("mucover expects a term of the form mu x . body")
    at = _target(args, const)
    budget = args.budget or 4096
    try:
        cs = mu_cover(d.inner, at, be, d.nx, budget)
    except NotFiniteType as err:
        out.write(f"# {err}")
        return 1
    out.write("\t".join(coords))
    out.write(format_covers(cs, show))
    out.figure("cover-graph", plotting.plot_cover_graph, cover_graph(d.inner, at, be, d.nx, budget), show)


def cmd_reach(args, out):
    be, const, show = _backend(args)
    var = args.var
    schemes = [descriptor_from_term(parse_term(read_input(s).strip(), [var]), [var], const)
               for s in args.scheme]
    seeds = [const(parse_term(read_input(s).strip())) for s in args.start]
    r = automaton_reach(schemes, seeds, be, args.budget or 512)
    for x in r.reach:
        out.write(show(x))
    if not r.closed:
        out.write("# budget exhausted before closure")
        return 1


# -- completion ----------------------------------------------------------------

def _map(p: FinitePoset, items) -> dict:
    f = {}
    for item in items:
        for pair in _names(item):
            if "=" not in pair:
                raise UsageError(f"--map expects a=b pairs, got {pair!r}")
            a, b = (x.strip() for x in pair.split("=", 1))
            if a not in p.index or b not in p.index:
                raise UsageError(f"unknown element in {pair!r}")
            f[a] = b
    missing = [x for x in p.elements if x not in f]
    if missing:
        raise UsageError(f"--map leaves {missing} unassigned")
    return f


def cmd_complete(args, out):
    p = parse_poset(read_input(args.poset))
    c = dm_completion(p)
    out.write(dump_completion(c))
    rep = check_completion(c)
    out.write(f"# complete={rep.complete} embedding={rep.embedding} join_dense={rep.join_dense} "
              f"meet_dense={rep.meet_dense}")
    out.figure("lattice", plotting.plot_lattice, c)
    return 0 if rep.ok else 1


def cmd_adjoint(args, out):
    p = parse_poset(read_input(args.poset))
    f = _map(p, args.map)
    try:
        e = extend_left_adjoint(p, f)
    except NotJoinPreserving as err:
        out.write(f"# {err}")
        return 1
    c = e.lattice
    out.write("cut\tf\tg")
    for a in c.cuts:
        out.write(f"{c.label(a)}\t{c.label(e.f(a))}\t{c.label(e.g(a))}")
    rep = check_adjoint(e)
    out.write(f"# extends={rep.extends} adjunction={rep.adjunction} joins={rep.joins} meets={rep.meets}")
    return 0 if rep.ok else 1


def _poset_algebra(args):
    if args.model:
        return PosetAlgebra.from_model(_model(args)), None
    if not args.poset:
        raise UsageError("give --model or --poset")
    p = parse_poset(read_input(args.poset))
    gens = {}
    for item in args.gen or ():
        if "=" not in item:
            raise UsageError(f"--gen expects name=element, got {item!r}")
        g, x = (s.strip() for s in item.split("=", 1))
        if x not in p.index:
            raise UsageError(f"unknown element {x!r}")
        gens[g] = x
    return PosetAlgebra(p, {}, gens), p


def cmd_preserve(args, out):
    base, _ = _poset_algebra(args)
    cm = complete_modal_structure(base)
    t = _term(args)
    ms = check_modal_structure(cm)
    out.write(f"modal_structure\t{'pass' if ms.ok else 'FAIL'}")
    if isinstance(t, Mu):
        rep = preservation_check(base, cm, t.body, t.var)
        out.write(f"fixed_point\t{rep.verdict}\tstages={rep.stages}\t{rep.detail}".rstrip())
        ok = rep.ok
    else:
        ok = term_preserved(base, cm, t)
        out.write(f"term\t{'preserved' if ok else 'not_preserved'}")
    return 0 if ok and ms.ok else 1


# -- witnesses and harnesses ------------------------------------------------------

def cmd_whitman(args, out):
    m = _model(args)
    lits = [parse_term(x) for x in _names(args.lits)]
    ys: dict[str, list] = {}
    for item in args.y or ():
        if "=" not in item:
            raise UsageError(f"--y expects act=term, got {item!r}")
        act, t = item.split("=", 1)
        ys.setdefault(act.strip(), []).append(parse_term(t.strip()))
    rep = whitman_check(lits, ys, m)
    if rep.kind == "certificate":
        first, second = rep.certificate
        out.write(f"certificate\t{show_states(m)(first)}\t{second}")
        return 0 if second else 1
    out.write(str(rep))


def cmd_harness(args, out):
    m = _model(args)
    f = parse_term(read_input(args.f).strip(), ["x", "y"])
    g = parse_term(read_input(args.g).strip(), ["x", "y"])
    tr = regular_harness(f, g, m, args.depth, args.width)
    for k in sorted(tr.verdicts):
        out.write(f"{k}\t{'pass' if tr.verdicts[k] else 'FAIL'}")
    return 0 if tr.ok else 1


def cmd_counterexample(args, out):
    rep = wrongconf_verify(args.budget or 100)
    out.write("status\trelation\tholds\tjustification")
    for line in rep.lines():
        out.write(line)
    return 0 if rep.ok else 1


def cmd_suite(args, out):
    names = list(SUITES) if args.name == "all" else [args.name]
    if args.name != "all" and args.name not in SUITES:
        raise UsageError(f"unknown suite {args.name!r}")
    ok = True
    first = True
    for name in names:
        r = run_suite(name, args.seed, args.budget)
        text = r.tsv()
        out.write(text if first else text.split("\n", 1)[1])
        first = False
        out.figure(name, plotting.plot_suite, r)
        ok = ok and r.ok
    return 0 if ok else 1


# -- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mualg", description=__doc__.split("\n")[0])
    ap.add_argument("--seed", type=int, default=0, help="random seed for sampled checks (default 0)")
    ap.add_argument("--budget", type=int, default=None,
                    help="sample count for suites, search budget for covers (default: per command)")
    ap.add_argument("--out", help="write the report here instead of standard output")
    ap.add_argument("--figures", help="directory for PNG figures (default: next to --out)")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help, term=True):
        p = sub.add_parser(name, help=help)
        p.set_defaults(fn=fn)
        if term:
            p.add_argument("term", help="term text, a file, or - for stdin")
        return p

    p = add("parse", cmd_parse, "parse a term and print it back")
    p.add_argument("--vars", help="comma separated free variables")
    p = add("print", cmd_print, "normalise a term, model, system or poset document", term=False)
    p.add_argument("input")
    p.add_argument("--kind", choices=("term", "model", "system", "poset"), default="term")
    p.add_argument("--vars")
    p = add("nnf", cmd_nnf, "negation normal form")
    p.add_argument("--vars")
    p = add("guard", cmd_guard, "guarded form of a term or system", term=False)
    p.add_argument("term", nargs="?")
    p.add_argument("--system", help="guard this system instead")
    p.add_argument("--vars")
    add("flclosure", cmd_flclosure, "closure under subterms and unfolding")
    p = add("classify", cmd_classify, "fixed-point class of a term, or the classes of a system", term=False)
    p.add_argument("term", nargs="?")
    p.add_argument("--system")
    p.add_argument("--vars")
    add("cnf", cmd_cnf, "modal clauses of a term")
    for name, fn, help in (("eval", cmd_eval, "evaluate a term on a model"),
                           ("approx", cmd_approx, "approximants of mu x . body on a model")):
        p = add(name, fn, help)
        p.add_argument("--model", required=True)
        p.add_argument("--let", action="append", help="x=s0,s1 binds a free variable")
    add("compile", cmd_compile, "elementary system for a least-fixed-point term")
    p = add("bekic", cmd_bekic, "solve a system by elimination and by joint iteration", term=False)
    p.add_argument("system")
    p.add_argument("--model", required=True)
    p.add_argument("--let", action="append")
    for name, fn, help in (("unravel", cmd_unravel, "rewrite a guarded system into a simple one"),
                           ("powerset", cmd_powerset, "disjunctive-simple system over subsets")):
        p = add(name, fn, help, term=False)
        p.add_argument("system")
    for name, fn, help in (("covers", cmd_covers, "cover set of a map at a target"),
                           ("mucover", cmd_mucover, "cover set of mu x . body at a target")):
        p = add(name, fn, help)
        p.add_argument("--coords", required=True, help="comma separated input variables")
        p.add_argument("--at", required=True, help="target term")
        p.add_argument("--model", help="exact finite backend; terms otherwise")
    p = add("reach", cmd_reach, "elements reached by cover transitions", term=False)
    p.add_argument("--scheme", action="append", required=True, help="unary map in --var")
    p.add_argument("--start", action="append", required=True, help="seed term")
    p.add_argument("--var", default="y")
    p.add_argument("--model")
    p = add("complete", cmd_complete, "completion of a finite poset by cuts", term=False)
    p.add_argument("poset")
    p = add("adjoint", cmd_adjoint, "extend a join-preserving map to the completion", term=False)
    p.add_argument("poset")
    p.add_argument("--map", action="append", required=True, help="a=b,c=d")
    p = add("preserve", cmd_preserve, "compare a term in an algebra and in its completion")
    p.add_argument("--model")
    p.add_argument("--poset")
    p.add_argument("--gen", action="append", help="p=element")
    p = add("whitman", cmd_whitman, "literal clash, bottom witness or product certificate", term=False)
    p.add_argument("--model", required=True)
    p.add_argument("--lits", default="")
    p.add_argument("--y", action="append", help="act=term")
    p = add("harness", cmd_harness, "compare joint and nested approximants of f(x,y), g(x,y)",
            term=False)
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--model", required=True)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--width", type=int, default=None)
    add("counterexample", cmd_counterexample, "replay the non-completable reduced power", term=False)
    p = add("suite", cmd_suite, "run an acceptance suite", term=False)
    p.add_argument("name", help="one of: " + ", ".join(SUITES) + ", all")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    for need in ("term",):
        if getattr(args, need, "") is None and not getattr(args, "system", None):
            ap.error(f"{args.command}: give a term or --system")
    out = Output(args)
    try:
        code = args.fn(args, out) or 0
    except (UsageError, *USAGE_ERRORS) as err:
        print(f"mualg {args.command}: {err}", file=sys.stderr)
        return 2
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
