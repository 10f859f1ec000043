"""Document commands: each returns a verdict and exact witnesses."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable

from .. import omni as O
from .. import dolbeault as DB
from .. import suites as S
from ..atiyah import AtiyahForm
from ..errors import ChartMismatch, DSLSyntaxError, GeometryError, UnknownIdentifier
from ..report import Report
from ..structures import gencontact as GC
from ..structures import jacobi as JB
from ..structures import nacs as NA
from . import evaluate as EV
from .syntax import Command, Name, show_statement

PASS, FAIL, ERROR = "pass", "fail", "error"


@dataclass
class Result:
    command: str
    verdict: str
    witnesses: list[str] = field(default_factory=list)
    elapsed_ms: int = 0
    line: int = 0

    def as_json(self) -> dict[str, Any]:
        return {"command": self.command, "verdict": self.verdict,
                "witnesses": list(self.witnesses), "elapsed_ms": self.elapsed_ms}


class Outcome:
    """What a command handler hands back before ``expect`` is applied."""

    def __init__(self, passed: bool, witnesses: list[str] | None = None):
        self.passed = passed
        self.witnesses = witnesses or []

    @classmethod
    def of(cls, rep: Report) -> "Outcome":
        return cls(rep.passed, list(rep.witnesses))


HANDLERS: dict[str, Callable[..., Outcome]] = {}
RAW_KWARGS = {"expect"}
RAW_FROM = {"backward-embedding": 1}


def command(verb: str):
    def deco(fn):
        HANDLERS[verb] = fn
        return fn
    return deco


def verbs() -> frozenset[str]:
    return frozenset(HANDLERS)


# ---- structure checks -----------------------------------------------------------------------

@command("check-jacobi")
def _check_jacobi(env, *args):
    J = args[0] if len(args) == 1 else EV.BUILTINS["jacobi"](env, *args)
    return Outcome.of(JB.check_jacobi_pair(J.Lam, J.E))


@command("check-hom-poisson")
def _check_hp(env, *args):
    h = args[0] if len(args) == 1 else EV.BUILTINS["hom_poisson"](env, *args)
    return Outcome.of(JB.check_hom_poisson(h.pi, h.Z))


@command("check-gcs")
def _check_gcs(env, K):
    return Outcome.of(GC.check_gen_contact(K))


@command("check-hom-gc")
def _check_hgc(env, h):
    return Outcome.of(GC.check_hom_gc(h))


@command("check-nacs")
def _check_nacs(env, t):
    return Outcome.of(NA.check_nacs(t))


@command("check-dl-complex")
def _check_dl(env, phi):
    return Outcome.of(NA.check_dl_complex(phi, EV._matrix_chart(phi)))


@command("check-dirac-jacobi")
def _check_dj(env, F):
    return Outcome.of(O.check_dirac_jacobi(F))


# ---- constructions ----------------------------------------------------------------------------

def _shown(label: str, v) -> Outcome:
    return Outcome(True, [f"{label} = {EV.show_value(v)}"])


@command("eigenframe")
def _eigen(env, K):
    return _shown("L", GC.eigenframe(K))


@command("dorfman")
def _dorfman(env, a, b):
    return _shown("bracket", O.dorfman(a, b))


@command("star")
def _star(env, F1, F2):
    return _shown("star", O.star(F1, F2))


@command("flat-product")
def _flat(env, F1, F2):
    return _shown("product", O.flat_product(F1, F2))


@command("backward-projection")
def _bproj(env, F):
    return _shown("image", EV.BUILTINS["backward_projection"](env, F))


@command("backward-embedding")
def _bemb(env, F, *names):
    return _shown("image", EV.BUILTINS["backward_embedding"](env, F, *names))


@command("split-contact")
def _split_c(env, *args, **kw):
    J = EV.BUILTINS["split_contact"](env, *args, **kw)
    rep = JB.check_jacobi_pair(J.Lam, J.E)
    return Outcome(rep.passed, [f"J = {EV.show_value(J)}"] + rep.witnesses)


@command("split-lcs")
def _split_l(env, *args, **kw):
    J = EV.BUILTINS["split_lcs"](env, *args, **kw)
    rep = JB.check_jacobi_pair(J.Lam, J.E)
    return Outcome(rep.passed, [f"J = {EV.show_value(J)}"] + rep.witnesses)


@command("invert-jacobi")
def _invert(env, J):
    inv = JB.invert_jacobi(J.Lam, J.E)
    return Outcome(True, [f"omega = {EV.show_value(inv.omega)}", f"theta = {EV.show_value(inv.theta)}"])


@command("solve-dbarD")
def _solve_dbar(env, w):
    w = EV.to_atiyah(w, EV._chart_arg(env, w))
    rho = DB.dbar_D_solve(w)
    ok = DB.dbar_D(rho) == w
    return Outcome(ok, [f"rho = {EV.show_value(rho)}"])


@command("solve-partialD")
def _solve_partial(env, w):
    w = EV.to_atiyah(w, EV._chart_arg(env, w))
    rho = DB.partial_D_solve(w)
    ok = DB.partial_D_projected(rho) == w
    return Outcome(ok, [f"rho = {EV.show_value(rho)}"])


@command("check-dolbeault")
def _check_dolb(env, w):
    """``dbar_D^2 = 0`` and ``d_D = partial_D + dbar_D`` on one form."""
    w = EV.to_atiyah(w, EV._chart_arg(env, w))
    wit = []
    sq = DB.dbar_D(DB.dbar_D(w))
    if not sq.is_zero():
        wit.append(f"dbar_D^2 = {EV.show_value(sq)}")
    split = DB.atiyah_d(w) - DB.partial_D_projected(w) - DB.dbar_D_projected(w)
    if not split.is_zero():
        wit.append(f"d_D - partial_D - dbar_D = {EV.show_value(split)}")
    closed = DB.dbar_D(w) - DB.dbar_D_projected(w)
    if not closed.is_zero():
        wit.append(f"closed form - projection = {EV.show_value(closed)}")
    return Outcome(not wit, wit)


# ---- comparisons ---------------------------------------------------------------------------------

@command("frame-equal")
def _frame_equal(env, F1, F2):
    ok = O.frame_equal(F1, F2)
    wit = [] if ok else [f"ranks {F1.rank()} and {F2.rank()}; spans differ"]
    return Outcome(ok, wit)


@command("equal")
def _equal(env, a, b):
    ch = EV._chart_for(a, b, env)
    a2, b2 = EV._promote_pair(a, b, ch)
    diff = a2 - b2
    ok = diff.is_zero() if hasattr(diff, "is_zero") else diff == 0
    return Outcome(ok, [] if ok else [f"difference = {EV.show_value(diff)}"])


@command("classify")
def _classify(env, F):
    c = GC.classify_dj(F)
    wit = [f"kind = {c.kind}", f"intersection rank = {c.data['intersection_rank']}"]
    at = c.data.get("one_component_at_samples")
    if at:
        origin = str(F.chart.origin())
        if origin in at:
            wit.append(f"one-component at {origin} = {at[origin]}")
    if "real_section" in c.data:
        wit.append(f"real section = {EV.show_value(c.data['real_section'])}")
    return Outcome(True, wit), c.kind


@command("bfield-symmetry")
def _bsym(env, B, a, b):
    B = EV.to_atiyah(B, EV._chart_arg(env, B))
    defect = S.bfield_defect(B, a, b)
    return Outcome(defect.is_zero(), [] if defect.is_zero() else [f"defect = {EV.show_value(defect)}"])


@command("show")
def _show(env, *values):
    return Outcome(True, [EV.show_value(v) for v in values])


# ---- randomized suites ------------------------------------------------------------------------------

def _suite(rep: Report) -> Outcome:
    notes = [f"{k} = {v}" for k, v in sorted(rep.data.items()) if isinstance(v, int)]
    return Outcome(rep.passed, rep.witnesses + notes)


@command("random-bracket")
def _rb(env, count=100, max_dim=4, degree=2):
    return _suite(S.bracket_suite(env.seed, int(count), int(max_dim), int(degree)))


@command("random-dolbeault")
def _rd(env, count=50, max_n=2, degree=3):
    return _suite(S.dolbeault_suite(env.seed, int(count), int(max_n), int(degree)))


@command("random-homogenization")
def _rh(env, count=20, max_n=2):
    return _suite(S.homogenization_suite(env.seed, int(count), int(max_n)))


# ---- running ------------------------------------------------------------------------------------------

class DocumentError(Exception):
    """An internal error: the document is unusable as written."""


def _is_internal(exc: GeometryError) -> bool:
    """Errors about the document itself rather than about the geometry."""
    return isinstance(exc, (UnknownIdentifier, ChartMismatch, DSLSyntaxError))


def run_command(cmd: Command, env: EV.Env, timings: bool = True) -> Result:
    text = show_statement(cmd)
    t0 = time.perf_counter()
    try:
        handler = HANDLERS.get(cmd.verb)
        if handler is None:
            raise UnknownIdentifier(f"unknown command {cmd.verb!r}")
        raw = {k: v for k, v in cmd.kwargs if k in RAW_KWARGS}
        kwargs = {k: EV.evaluate(v, env) for k, v in cmd.kwargs if k not in RAW_KWARGS}
        args = EV.raw_args(cmd.args, RAW_FROM.get(cmd.verb), env)
        try:
            out = handler(env, *args, **kwargs)
            got = None
            if isinstance(out, tuple):
                out, got = out
        except GeometryError as exc:
            if _is_internal(exc):
                raise
            out, got = Outcome(False, [f"{type(exc).__name__}: {exc}"]), None
        verdict = PASS if out.passed else FAIL
        wit = list(out.witnesses)
        if "expect" in raw:
            want = raw["expect"]
            want = want.id if isinstance(want, Name) else EV.show_value(EV.evaluate(want, env))
            if want in (PASS, FAIL):
                verdict = PASS if (out.passed == (want == PASS)) else FAIL
                if verdict == FAIL:
                    wit.append(f"expected {want}")
            elif got is not None:
                verdict = PASS if got == want else FAIL
                if verdict == FAIL:
                    wit.append(f"expected {want}, got {got}")
            else:
                raise EV.EvalError(f"expect={want} is not meaningful for {cmd.verb}")
    except Exception as exc:  # internal errors become exit status 2
        verdict = ERROR
        wit = [f"{type(exc).__name__}: {exc}"]
    ms = int(round((time.perf_counter() - t0) * 1000)) if timings else 0
    return Result(text, verdict, wit, ms, cmd.line)
