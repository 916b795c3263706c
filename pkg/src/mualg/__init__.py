"""Modal mu-calculus algebra toolkit: terms, finite models, equation
systems, cover sets, completions by cuts and a non-completable reduced
power."""
from .algebra import EvalError, evaluate, iterate, lfp
from .completion import (
    CutLattice, FinitePoset, PosetAlgebra, check_adjoint, check_completion, dm_completion,
    extend_left_adjoint, preservation_check,
)
from .counterexample import wrongconf_verify
from .covers import FiniteBackend, SyntacticBackend, cover, descriptor_from_term, mu_cover
from .formats import parse_model, parse_poset, parse_system
from .kripke import KripkeModel, Sampler, check_eq, check_leq, eval_term, random_model
from .normal import classify, fl_closure, guard, modal_cnf, nnf
from .parsing import TermSyntaxError, parse_term
from .printing import print_term
from .suites import SUITES, run_suite
from .systems import System, bekic_solve, compile_sigma1, simultaneous_solve

__all__ = [
    "EvalError", "evaluate", "iterate", "lfp",
    "CutLattice", "FinitePoset", "PosetAlgebra", "check_adjoint", "check_completion", "dm_completion",
    "extend_left_adjoint", "preservation_check",
    "wrongconf_verify",
    "FiniteBackend", "SyntacticBackend", "cover", "descriptor_from_term", "mu_cover",
    "parse_model", "parse_poset", "parse_system",
    "KripkeModel", "Sampler", "check_eq", "check_leq", "eval_term", "random_model",
    "classify", "fl_closure", "guard", "modal_cnf", "nnf",
    "TermSyntaxError", "parse_term", "print_term",
    "SUITES", "run_suite",
    "System", "bekic_solve", "compile_sigma1", "simultaneous_solve",
]
