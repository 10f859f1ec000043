import json
import random
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from jacobigeom.atiyah import AtiyahForm
from jacobigeom.cli import commands as CMD
from jacobigeom.cli import evaluate as EV
from jacobigeom.cli.main import main, parse_document, run_text, suite_documents
from jacobigeom.cli.syntax import (Binding, BinOp, Call, ChartDecl, Command, Document, Name, Neg,
                                   Num, SampleDecl, Vec, parse, parse_expr, show_document)
from jacobigeom.errors import DSLSyntaxError
from jacobigeom.randgen import rand_atiyah, rand_section
from jacobigeom.scalars import Chart
from jacobigeom.structures import gallery as G


def _write(tmp_path, text, name="doc.jg"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


# ---- parsing -------------------------------------------------------------------------------

def test_smoke_parse():
    doc = parse_document("chart (x, p, u); Lam = @p^(@x + p*@u); E = @u; check-jacobi Lam, E")
    assert len(doc.commands) == 1
    assert doc.commands[0].verb == "check-jacobi"
    assert doc.statements[0] == ChartDecl(("x", "p", "u"), 1)


def test_duplicate_coordinate():
    with pytest.raises(DSLSyntaxError) as err:
        parse_document("chart (x, x)")
    assert (err.value.line, err.value.column) == (1, 11)


def test_syntax_error_location():
    with pytest.raises(DSLSyntaxError) as err:
        parse_document("chart (x, y)\nf = x +\n")
    assert err.value.line == 2
    with pytest.raises(DSLSyntaxError) as err:
        parse_document("chart (x)\nno-such-verb x\n")
    assert (err.value.line, err.value.column) == (2, 1)
    with pytest.raises(DSLSyntaxError):
        parse_document("chart (x, dy)")


def test_precedence():
    e = parse_expr("-x^2 + y*z/w - (a - b)")
    assert e == BinOp("-", BinOp("+", Neg(BinOp("^", Name("x"), Num(2))),
                                 BinOp("/", BinOp("*", Name("y"), Name("z")), Name("w"))),
                      BinOp("-", Name("a"), Name("b")))


def test_gallery_shorthand():
    env = EV.load(parse_document("chart (x, p, u)\nJ = canonical(J_can, d=1)\n"), EV.Env())
    J = env.values["J"]
    assert J.Lam == G.J_can(1).Lam and J.E == G.J_can(1).E


def test_value_rendering_round_trip():
    ch = Chart(("x", "p", "u"))
    env = EV.Env()
    env.chart = ch
    rng = random.Random(9)
    vals = [G.J_can(1).Lam, G.theta_can(1), G.omega_can(1), rand_atiyah(ch, 2, rng, 2, complex_=True),
            rand_section(ch, rng).D, ch.coord("x") / (ch.coord("p") + 1)]
    for v in vals:
        back = EV.evaluate(parse_expr(EV.show_value(v)), env)
        back = EV._promote_pair(back, v, ch)[0]
        assert back == v


# ---- randomized documents -----------------------------------------------------------------

COORDS = ["x", "y", "p", "q", "u", "a1"]
NAMES = COORDS + ["f", "g", "Lam", "omega", "j", "one", "i"]
KEYS = ["d", "n", "count", "expect", "seed"]
VERBS = sorted(CMD.verbs())

leaves = st.one_of(st.integers(0, 50).map(Num), st.sampled_from(NAMES).map(Name),
                   st.sampled_from(COORDS).map(Vec))


def _extend(children):
    calls = st.builds(
        lambda f, a, kw: Call(f, tuple(a), tuple(dict(kw).items())),
        st.sampled_from(["canonical", "jet", "sec", "d", "dD", "pair"]),
        st.lists(children, max_size=3),
        st.lists(st.tuples(st.sampled_from(KEYS), children), max_size=2))
    return st.one_of(
        st.builds(Neg, children),
        st.builds(BinOp, st.sampled_from(["+", "-", "*", "/", "^"]), children, children),
        calls)


exprs = st.recursive(leaves, _extend, max_leaves=12)
statements = st.one_of(
    st.lists(st.sampled_from(COORDS), min_size=1, max_size=4, unique=True).map(lambda n: ChartDecl(tuple(n))),
    st.lists(st.tuples(st.sampled_from(COORDS), exprs), min_size=1, max_size=3, unique_by=lambda t: t[0])
      .map(lambda v: SampleDecl(tuple(v))),
    st.builds(Binding, st.sampled_from(["f", "g", "Lam", "omega", "F"]), exprs),
    st.builds(lambda v, a, kw: Command(v, tuple(a), tuple(dict(kw).items())),
              st.sampled_from(VERBS), st.lists(exprs, max_size=3),
              st.lists(st.tuples(st.sampled_from(KEYS), exprs), max_size=2)),
)
documents = st.lists(statements, max_size=8).map(lambda s: Document(tuple(s)))


@given(documents)
def test_parse_print_round_trip(doc):
    text = show_document(doc)
    again = parse(text, CMD.verbs())
    assert again.canonical() == doc.canonical()
    assert show_document(again) == text


@given(exprs)
def test_expression_round_trip(e):
    from jacobigeom.cli.syntax import show
    assert parse_expr(show(e)) == e


# ---- running documents ----------------------------------------------------------------------

HOM_FAIL = "chart (x, p)\nH = canonical(pi_can, d=1)\ncheck-hom-poisson H.pi, 0\n"


def test_hom_poisson_without_Z_fails(tmp_path, capsys):
    doc = _write(tmp_path, "chart (x, p)\npi = @p^@x\ncheck-hom-poisson pi, 0\n")
    assert main(["run", doc]) == 1
    out = capsys.readouterr().out
    assert "[FAIL ]" in out and "L_Z pi + pi" in out


def test_undefined_name_is_an_error(tmp_path, capsys):
    doc = _write(tmp_path, "chart (x, p)\ncheck-jacobi nowhere\n")
    assert main(["run", doc]) == 2
    assert "UnknownIdentifier" in capsys.readouterr().out


def test_unparseable_document(tmp_path, capsys):
    doc = _write(tmp_path, "chart (x, x)\n")
    assert main(["run", doc]) == 2
    assert "DSLSyntaxError" in capsys.readouterr().out


def test_expectations(tmp_path):
    text = ("chart (x, p)\npi = @p^@x\n"
            "check-hom-poisson pi, 0, expect=fail\n"
            "check-hom-poisson pi, p*@p, expect=pass\n")
    assert main(["run", _write(tmp_path, text), "-q"]) == 0


def test_gallery_document(tmp_path):
    text = ("chart (x, p, u)\nJ = canonical(J_can, d=1)\ncheck-jacobi J\n"
            "K = canonical(K_can)\ncheck-gcs K\ninvert-jacobi J\n")
    assert main(["run", _write(tmp_path, text), "-q"]) == 0


def test_reports_are_reproducible(tmp_path):
    doc = _write(tmp_path, "chart (x, p)\npi = @p^@x\ncheck-hom-poisson pi, 0\nrandom-bracket count=9\n")
    r1, r2 = tmp_path / "a.json", tmp_path / "b.json"
    main(["run", doc, "--report", str(r1), "--no-timings", "--seed", "5"])
    main(["run", doc, "--report", str(r2), "--no-timings", "--seed", "5"])
    assert r1.read_bytes() == r2.read_bytes()
    rep = json.loads(r1.read_text())
    assert rep["verdict"] == "fail" and rep["seed"] == 5
    res = rep["documents"][0]["results"]
    assert [r["verdict"] for r in res] == ["fail", "pass"]
    assert set(res[0]) == {"command", "verdict", "witnesses", "elapsed_ms", "line"}
    # witnesses are written in document syntax
    rhs = res[0]["witnesses"][0].split(" = ", 1)[1]
    parse_expr(rhs)


def test_parallel_matches_sequential(tmp_path):
    text = ("chart (x, p, u)\nJ = canonical(J_can, d=1)\ncheck-jacobi J\n"
            "check-jacobi J.Lam, 0\nrandom-bracket count=6\n").replace("J.Lam", "@p^@x")
    doc = _write(tmp_path, text)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["run", doc, "--report", str(a), "--no-timings"])
    main(["run", doc, "--report", str(b), "--no-timings", "--parallel"])
    assert a.read_bytes() == b.read_bytes()


def test_max_degree_guard(tmp_path, capsys):
    doc = _write(tmp_path, "chart (x, p)\nf = x^5\nshow f\n")
    assert main(["run", doc, "--max-degree", "3"]) == 2
    assert main(["run", doc, "--max-degree", "5"]) == 0


def test_samples_flag(tmp_path):
    env = EV.Env(extra_samples=2)
    env.samples.append({"x": 1, "p": 2})
    assert len(env.samples_for(Chart(("x", "p")))) == 7
    assert len(env.samples_for(Chart(("x", "u")))) == 6


def test_format_command(tmp_path, capsys):
    doc = _write(tmp_path, "chart(x,p) ; f=x*(p+1)^2\nshow   f,x\n")
    assert main(["format", doc]) == 0
    assert capsys.readouterr().out == "chart (x, p)\nf = x * (p + 1)^2\nshow f, x\n"


def test_suite_lists_documents(capsys):
    assert main(["suite", "--list"]) == 0
    names = capsys.readouterr().out.split()
    assert names == [n for n, _ in suite_documents()]
    assert len(names) == 7


def test_module_entry_point(tmp_path):
    doc = _write(tmp_path, "chart (x, p)\npi = @p^@x\ncheck-hom-poisson pi, p*@p\n")
    proc = subprocess.run([sys.executable, "-m", "jacobigeom", "run", doc, "-q"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert proc.stdout.startswith("PASS")


def test_run_text_reports_load_errors():
    class Opts:
        samples, seed, max_degree, parallel, no_timings = 0, 0, None, False, True
    rep = run_text("chart (x)\nf = y\n", Opts(), "t")
    assert rep["verdict"] == "error" and rep["error"].startswith("line 2")
