import pytest

from mualg.cli import main
from mualg.completion import dm_completion, dump_completion
from mualg.formats import parse_model, parse_poset, parse_system
from mualg.kripke import eval_term, lfp_iterate
from mualg.normal import nnf
from mualg.parsing import parse_term
from mualg.printing import print_term
from mualg.systems import bekic_solve

from conftest import M1_TEXT

SYSTEM = "bound: x y\nx := p | <a> y\ny := q & <a> x\n"
POSET = "elem: a b c d\nleq: a<c a<d b<c b<d\n"


@pytest.fixture
def files(tmp_path):
    (tmp_path / "m1.txt").write_text(M1_TEXT)
    (tmp_path / "sys.txt").write_text(SYSTEM)
    (tmp_path / "po.txt").write_text(POSET)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_and_print(capsys):
    code, out, _ = run(capsys, "parse", "mu x . p | <a> x")
    assert code == 0 and out == "mu x . p | <a> x\n"
    code, _, err = run(capsys, "parse", "mu x . ~x")
    assert code == 2 and "negation" in err


def test_nnf_is_a_thin_adapter(capsys):
    text = "~(mu x . p | <a> x)"
    _, out, _ = run(capsys, "nnf", text)
    assert out.strip() == print_term(nnf(parse_term(text)))


def test_eval_and_approx(capsys, files):
    m1 = files / "m1.txt"
    _, out, _ = run(capsys, "eval", "<a> p", "--model", str(m1))
    assert out == "{s0,s1}\n"
    _, out, _ = run(capsys, "approx", "mu x . p | <a> x", "--model", str(m1))
    m = parse_model(M1_TEXT)
    vals = lfp_iterate(m, parse_term("p | <a> x", ["x"]), "x").values
    assert out.splitlines()[1:] == [f"{i}\t" + "{" + ",".join(sorted(m.names(v))) + "}"
                                    for i, v in enumerate(vals)]


def test_model_from_stdin(capsys, monkeypatch):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO(M1_TEXT))
    code, out, _ = run(capsys, "eval", "p", "--model", "-")
    assert code == 0 and out == "{s1}\n"


def test_bekic_output_matches_engine(capsys, files):
    code, out, _ = run(capsys, "bekic", str(files / "sys.txt"), "--model", str(files / "m1.txt"))
    sol = bekic_solve(parse_system(SYSTEM), parse_model(M1_TEXT))
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()[1:]]
    m = parse_model(M1_TEXT)
    for x, a, b in rows:
        assert a == b == "{" + ",".join(sorted(m.names(sol[x]))) + "}"


def test_covers_both_backends(capsys, files):
    _, out, _ = run(capsys, "covers", "y | <a> x", "--coords", "x,y", "--at", "~p | <a> q")
    assert out == "x\ty\nq\t~p | <a> q\n"
    _, out, _ = run(capsys, "covers", "<a> x", "--coords", "x", "--at", "p", "--model", str(files / "m1.txt"))
    assert out == "x\n{s0}\n"


def test_mucover_writes_cover_graph(capsys, files):
    out_path = files / "r" / "mu.tsv"
    code, _, _ = run(capsys, "--out", str(out_path), "mucover", "mu x . y | <a> x", "--coords", "y",
                     "--at", "p", "--model", str(files / "m1.txt"))
    assert code == 0
    assert out_path.read_text().splitlines()[0] == "y"
    assert (files / "r" / "mu-cover-graph.png").stat().st_size > 0


def test_complete_matches_engine_and_draws(capsys, files):
    out_path = files / "c.tsv"
    code, _, _ = run(capsys, "--out", str(out_path), "complete", str(files / "po.txt"))
    assert code == 0
    text = out_path.read_text()
    assert text.startswith(dump_completion(dm_completion(parse_poset(POSET))))
    assert (files / "c-lattice.png").exists()


def test_adjoint_rejects_non_join_preserving(capsys, files):
    (files / "l.txt").write_text("elem: 0 a b 1\nleq: 0<a<1 0<b<1\n")
    code, out, _ = run(capsys, "adjoint", str(files / "l.txt"), "--map", "0=0,a=a,b=b,1=a")
    assert code == 1 and out.startswith("#")
    code, _, _ = run(capsys, "adjoint", str(files / "l.txt"), "--map", "0=0,a=b,b=a,1=1")
    assert code == 0
    code, _, _ = run(capsys, "adjoint", str(files / "l.txt"), "--map", "0=0")
    assert code == 2


def test_preserve_and_whitman(capsys, files):
    m1 = str(files / "m1.txt")
    code, out, _ = run(capsys, "preserve", "mu x . p | <a> x", "--model", m1)
    assert code == 0 and "preserved" in out
    code, out, _ = run(capsys, "whitman", "--model", m1, "--lits", "p,~p")
    assert out.startswith("literal_clash")


def test_counterexample_and_suites(capsys, files):
    code, out, _ = run(capsys, "--budget", "100", "counterexample")
    assert code == 0 and out.splitlines()[-1].startswith("ok\tmu <= phi_0\tFalse")
    code, _, err = run(capsys, "suite", "nonexistent")
    assert code == 2 and "unknown suite" in err
    code, out, _ = run(capsys, "--seed", "42", "suite", "bekic")
    assert code == 0 and "FAIL" not in out


def test_reports_are_deterministic(capsys, files):
    a = run(capsys, "--seed", "3", "--budget", "5", "suite", "guard")[1]
    b = run(capsys, "--seed", "3", "--budget", "5", "suite", "guard")[1]
    assert a == b


def test_suite_report_and_figure(capsys, files):
    out_path = files / "rep.tsv"
    code, _, _ = run(capsys, "--out", str(out_path), "--budget", "3", "suite", "whitman")
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == "suite\tcheck\tverdict\tdetail"
    assert all(line.split("\t")[2] == "pass" for line in lines[1:])
    assert (files / "rep-whitman.png").exists()


def test_system_commands(capsys, files):
    s = str(files / "sys.txt")
    assert run(capsys, "classify", "--system", s)[1] == "guarded\n"
    code, _, err = run(capsys, "powerset", s)
    assert code == 2 and "simple" in err
    code, out, _ = run(capsys, "compile", "<a> q")
    assert code == 0 and "designated: x" in out
    assert run(capsys, "unravel", s)[0] == 0


def test_eval_agrees_with_library(capsys, files):
    m = parse_model(M1_TEXT)
    t = "nu z . <a> z & p"
    _, out, _ = run(capsys, "eval", t, "--model", str(files / "m1.txt"))
    assert out.strip() == "{" + ",".join(sorted(m.names(eval_term(m, parse_term(t))))) + "}"
