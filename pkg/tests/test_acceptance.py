"""Acceptance criteria 1-14, each one suite at its default sample size.

One line per criterion is printed in the terminal summary."""
import pytest

from mualg.suites import run_suite

CRITERIA = [
    (1, "bekic", "elimination equals joint iteration"),
    (2, "constructive", "least-fixed-point terms are constructive"),
    (3, "guard", "guarding is sound, approximants sandwiched"),
    (4, "powerset", "translation to subset-indexed systems commutes"),
    (5, "arrow_cases", "arrow meet case identities"),
    (6, "kleene_star", "star iteration and closure bound"),
    (7, "covers", "cover sets sound and complete"),
    (8, "mu_covers", "fixed-point covers match the oracle"),
    (9, "spcon_covers", "special conjunction covers"),
    (10, "whitman", "product with two and certificates"),
    (11, "harness", "joint and nested approximants"),
    (12, "counterexample", "reduced power relations"),
    (13, "completion", "completion, adjoints, preservation"),
    (14, "compile", "compiled systems compute the term"),
]
TIME_LIMIT = 60.0

RESULTS: list[str] = []


@pytest.mark.parametrize("number, suite, what", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(number, suite, what):
    r = run_suite(suite, seed=0)
    fast = r.seconds < TIME_LIMIT
    ok = r.ok and fast
    failed = [row for row in r.rows if not row.passed]
    line = f"criterion {number:2d} {suite:15s} {'PASS' if ok else 'FAIL'}  {r.seconds:6.1f}s  {what}"
    RESULTS.append(line)
    print(line)
    assert r.ok, "\n".join(f"{row.check}: {row.detail}" for row in failed)
    assert fast, f"{suite} took {r.seconds:.1f}s"
