"""The eight acceptance criteria, each under its runtime limit.

Every criterion prints one ``PASS``/``FAIL`` line; run with ``-s`` or as a
script to see them inline.
"""
import sys
import time

import pytest

from jacobigeom import omni as O
from jacobigeom.cli.main import main
from jacobigeom.structures import gallery as G
from jacobigeom.structures import gencontact as GC
from jacobigeom.structures import jacobi as JB
from jacobigeom.structures import nacs as NA
from jacobigeom.structures.products import hom_poisson_frame
from jacobigeom.scalars import Chart
from jacobigeom.cartan import partial
from jacobigeom.suites import bracket_suite, dolbeault_suite, homogenization_suite

LIMITS = {1: 10, 2: 30, 3: 10, 4: 5, 5: 10, 6: 30, 7: 20, 8: 120}
TITLES = {1: "canonical gallery", 2: "bracket calculus", 3: "splitting identity",
          4: "eigenbundle identities", 5: "leaf and transversal", 6: "Dolbeault-Atiyah solver",
          7: "homogenization", 8: "full CLI suite"}


def _announce(n, ok, elapsed, detail=""):
    line = (f"{'PASS' if ok else 'FAIL'} criterion {n} ({TITLES[n]}): "
            f"{elapsed:.2f} s of {LIMITS[n]} s{'; ' + detail if detail else ''}")
    sys.__stdout__.write(line + "\n")
    sys.__stdout__.flush()


def _run(n, body):
    t0 = time.perf_counter()
    problems = body()
    elapsed = time.perf_counter() - t0
    if elapsed >= LIMITS[n]:
        problems.append(f"took {elapsed:.2f} s")
    _announce(n, not problems, elapsed, "; ".join(problems))
    assert not problems


def _failed(label, rep):
    return [] if rep.passed else [f"{label}: {rep.witnesses}"]


def criterion_1():
    out = []
    for d in (1, 2):
        J = G.J_can(d)
        out += _failed(f"J_can d={d}", JB.check_jacobi_pair(J.Lam, J.E))
        H = G.pi_can(d)
        out += _failed(f"pi_can d={d}", JB.check_hom_poisson(H.pi, H.Z))
    J = G.J_can(1)
    out += _failed("contact K", GC.check_gen_contact(GC.contact_operator(J.Lam, J.E)))
    out += _failed("complex K", GC.check_gen_contact(GC.complex_operator(G.phi_can(1), G.cylinder_chart(1))))
    for n in (1, 2):
        out += _failed(f"phi_can n={n}", NA.check_dl_complex(G.phi_can(n), G.cylinder_chart(n)))
    ch = G.cylinder_chart(1)
    x, y = ch.coord("x"), ch.coord("y")
    for label, f in (("0", ch.zero), ("x", x), ("xy", x * y)):
        out += _failed(f"NACS f={label}", NA.check_nacs(G.nacs_normal_form(f, 1)))
    return out


def criterion_2():
    rep = bracket_suite(seed=0, count=102, max_dim=4, degree=2)
    out = _failed("bracket suite", rep)
    if rep.data["sections"] < 100:
        out.append("fewer than 100 sections")
    return out


def criterion_3():
    out = []
    H = G.pi_can(1, ("y", "q"))
    Jx = JB.split_contact(H.pi, H.Z, 1)
    out += _failed("split contact", JB.check_jacobi_pair(Jx.Lam, Jx.E))
    Jc = G.J_can(1)
    Lx = O.flat_product(hom_poisson_frame(H.pi, H.Z), O.graph_jacobi(Jc.Lam, Jc.E))
    if not O.frame_equal(Lx, O.graph_jacobi(Jx.Lam, Jx.E)):
        out.append("contact flat product differs from graph(J x)")
    N = Chart(("a", "b", "c"))
    b = N.coord("b")
    Lam = partial(N, "b").wedge(partial(N, "a") + partial(N, "c").scale(b))
    E = partial(N, "c")
    out += _failed("lcs leaf pair", JB.check_jacobi_pair(Lam, E))
    Hc = G.pi_can(1)
    Jl = JB.split_lcs(Lam, E, 1)
    out += _failed("split lcs", JB.check_jacobi_pair(Jl.Lam, Jl.E))
    Ll = O.flat_product(hom_poisson_frame(Hc.pi, Hc.Z), O.graph_jacobi(Lam, E))
    if not O.frame_equal(Ll, O.graph_jacobi(Jl.Lam, Jl.E)):
        out.append("lcs flat product differs from graph(split_lcs)")
    return out


def criterion_4():
    out = []
    J = G.J_can(1)
    ch = J.Lam.chart
    omega = G.omega_can(1)
    L = GC.eigenframe(GC.contact_operator(J.Lam, J.E))
    if not O.frame_equal(L, O.frame_bfield(omega.scale(ch.i), O.dr_frame(ch))):
        out.append("contact eigenframe differs from e^{i omega_can}")
    if O.frame_equal(L, O.frame_bfield(omega.scale(-ch.i), O.dr_frame(ch))):
        out.append("contact eigenframe also equals e^{-i omega_can}")
    h = G.hgc_symplectic(1)
    out += _failed("symplectic hom-GC", GC.check_hom_gc(h))
    xi = G.xi_can(1)
    if not O.frame_equal(GC.build_L_JZ(h), O.frame_bfield(xi.scale(xi.chart.i), O.dr_frame(xi.chart))):
        out.append("L_JZ differs from e^{i xi_can}")
    return out


def criterion_5():
    out = []
    H = G.pi_can(1, ("y", "q"))
    Jx = JB.split_contact(H.pi, H.Z, 1)
    out += _failed("contact operator", GC.check_gen_contact(GC.contact_operator(Jx.Lam, Jx.E)))
    L = GC.eigenframe(GC.contact_operator(Jx.Lam, Jx.E))
    leaf = GC.classify_dj(O.backward_embedding(L, ["y", "q"]))
    if leaf.kind != "generalized_contact":
        out.append(f"leaf classified as {leaf.kind}")
    transversal_frame = O.backward_embedding(L, ["x", "p", "u"])
    trans = GC.classify_dj(transversal_frame)
    if trans.kind != "hom_gc":
        out.append(f"transversal classified as {trans.kind}")
    else:
        origin = str(transversal_frame.chart.origin())
        val = trans.data["one_component_at_samples"].get(origin)
        if val is None or val == 0:
            out.append(f"one-component at the origin is {val}")
    if not O.frame_equal(transversal_frame, G.canonical("L_can_ev", 1, ("y", "q"))):
        out.append("transversal image differs from L_can_ev")
    return out


def criterion_6():
    rep = dolbeault_suite(seed=0, count=50, max_n=2, degree=3)
    return _failed("Dolbeault suite", rep)


def criterion_7():
    rep = homogenization_suite(seed=0, count=24, max_n=2)
    return _failed("homogenization suite", rep)


def criterion_8():
    import contextlib
    import io

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(["suite", "-q", "--no-timings"])
    out = [] if code == 0 else [f"exit status {code}: {buf.getvalue().strip()}"]
    return out


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
            5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    _run(n, CRITERIA[n])


if __name__ == "__main__":
    failed = 0
    for n in sorted(CRITERIA):
        try:
            _run(n, CRITERIA[n])
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
