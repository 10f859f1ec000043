"""Evaluation of document expressions into geometric values."""
from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable

from .. import cartan as C
from .. import omni as O
from ..atiyah import AtiyahForm, Derivation, atiyah_d, render_atiyah, render_derivation
from ..cartan import Endo, Form, Multivector
from ..errors import ChartMismatch, UnknownIdentifier
from ..scalars import Chart, SamplePoint, Scalar, gauss_to_fractions, render
from ..structures import gallery as G
from ..structures import gencontact as GC
from ..structures import jacobi as JB
from ..structures import nacs as NA
from ..structures.products import hom_poisson_frame
from .. import dolbeault as DB
from .syntax import BinOp, Call, ChartDecl, Document, Expr, Name, Neg, Num, SampleDecl, Binding, Vec


class EvalError(Exception):
    """A value-level error in a document (wrong types, bad arguments)."""


# ---- chart-free numbers ------------------------------------------------------------------

class Gauss:
    """Exact ``re + i im`` with rational parts; literals stay chart-free until combined."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re, self.im = Fraction(re), Fraction(im)

    @staticmethod
    def of(v) -> "Gauss":
        return v if isinstance(v, Gauss) else Gauss(v)

    def __add__(self, o):
        o = Gauss.of(o)
        return Gauss(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Gauss(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-Gauss.of(o))

    def __rsub__(self, o):
        return Gauss.of(o) - self

    def __mul__(self, o):
        o = Gauss.of(o)
        return Gauss(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = Gauss.of(o)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise EvalError("division by zero")
        return self * Gauss(o.re / n, -o.im / n)

    def __rtruediv__(self, o):
        return Gauss.of(o) / self

    def __pow__(self, k: int):
        out, base = Gauss(1), self if k >= 0 else Gauss(1) / self
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, o):
        return isinstance(o, (Gauss, int, Fraction)) and (self - o).re == 0 and (self - o).im == 0

    def __hash__(self):
        return hash((self.re, self.im))

    def simplify(self):
        if self.im:
            return self
        return int(self.re) if self.re.denominator == 1 else self.re


NUMBER = (int, Fraction, Gauss)


# ---- environment -----------------------------------------------------------------------

class Env:
    def __init__(self, extra_samples: int = 0, seed: int = 0, max_degree: int | None = None):
        self.chart: Chart | None = None
        self.values: dict[str, Any] = {}
        self.samples: list[dict[str, Fraction]] = []
        self.extra_samples = extra_samples
        self.seed = seed
        self.max_degree = max_degree

    def require_chart(self) -> Chart:
        if self.chart is None:
            raise EvalError("no chart declared")
        return self.chart

    def samples_for(self, chart: Chart) -> list[SamplePoint]:
        pts = chart.default_samples(count=3 + self.extra_samples)
        for s in self.samples:
            if all(n in s for n in chart.names):
                pts.append(SamplePoint(chart, tuple(s[n] for n in chart.names)))
        return pts


def load(doc: Document, env: Env) -> Env:
    """Run every declaration and binding of ``doc``."""
    for s in doc.statements:
        try:
            _declare(s, env)
        except Exception as exc:
            exc.line = s.line
            raise
    return env


def _declare(s, env: Env) -> None:
    if isinstance(s, ChartDecl):
        env.chart = Chart(s.names)
    elif isinstance(s, SampleDecl):
        env.samples.append({k: _rational(evaluate(e, env)) for k, e in s.values})
    elif isinstance(s, Binding):
        v = evaluate(s.expr, env)
        _guard_degree(v, env.max_degree, s.name)
        env.values[s.name] = v


def _rational(v) -> Fraction:
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, Fraction):
        return v
    if isinstance(v, Scalar) and v.is_const():
        re, im = gauss_to_fractions(v.const_value())
        if im == 0:
            return re
    raise EvalError(f"sample values must be rational numbers, got {show_value(v)}")


def _scalars_of(v):
    if isinstance(v, Scalar):
        yield v
    elif isinstance(v, (Form, Multivector)):
        yield from v.comps.values()
    elif isinstance(v, AtiyahForm):
        yield from _scalars_of(v.w0)
        yield from _scalars_of(v.w1)
    elif isinstance(v, Derivation):
        yield from _scalars_of(v.X)
        yield v.f


def _guard_degree(v, limit: int | None, name: str) -> None:
    if limit is None:
        return
    for s in _scalars_of(v):
        if s.degree() > limit:
            raise EvalError(f"{name}: degree {s.degree()} exceeds --max-degree {limit}")


# ---- coercions ---------------------------------------------------------------------------

def _chart_of(v) -> Chart | None:
    if isinstance(v, (Scalar, Form, Multivector, AtiyahForm, Derivation, Endo)):
        return v.chart
    if isinstance(v, (O.OmniSection, O.Frame)):
        return v.chart
    return None


def to_scalar(v, chart: Chart) -> Scalar:
    if isinstance(v, (int, Fraction)):
        return chart.const(v)
    if isinstance(v, Gauss):
        return chart.const(v.re, v.im)
    if isinstance(v, Scalar):
        return v
    if isinstance(v, Form) and v.degree == 0:
        return C.function_of(v)
    raise EvalError(f"expected a function, got {kind(v)}")


def to_atiyah(v, chart: Chart, degree: int | None = None) -> AtiyahForm:
    if isinstance(v, AtiyahForm):
        return v
    if isinstance(v, Form):
        return AtiyahForm.embed(v)
    if isinstance(v, (int, Fraction, Gauss, Scalar)):
        s = to_scalar(v, chart)
        if s.is_zero() and degree is not None:
            return AtiyahForm.zero(chart, degree)
        return AtiyahForm.function(s)
    raise EvalError(f"expected an Atiyah form, got {kind(v)}")


def to_derivation(v, chart: Chart) -> Derivation:
    if isinstance(v, Derivation):
        return v
    if isinstance(v, Multivector) and v.degree == 1:
        return Derivation(v, chart.zero)
    if isinstance(v, Multivector) and v.is_zero():
        return Derivation.zero(chart)
    if isinstance(v, (int, Fraction, Gauss, Scalar)) and to_scalar(v, chart).is_zero():
        return Derivation.zero(chart)
    raise EvalError(f"expected a derivation, got {kind(v)}")


def to_vector(v, chart: Chart, degree: int = 1) -> Multivector:
    if isinstance(v, Multivector):
        return v
    if isinstance(v, (int, Fraction, Gauss, Scalar)) and to_scalar(v, chart).is_zero():
        return C.zero_multivector(chart, degree)
    raise EvalError(f"expected a multivector, got {kind(v)}")


def to_form(v, chart: Chart, degree: int = 1) -> Form:
    if isinstance(v, Form):
        return v
    if isinstance(v, (int, Fraction, Gauss, Scalar)) and to_scalar(v, chart).is_zero():
        return C.zero_form(chart, degree)
    if isinstance(v, AtiyahForm) and v.w1.is_zero():
        return v.w0
    raise EvalError(f"expected a differential form, got {kind(v)}")


def kind(v) -> str:
    if isinstance(v, int):
        return "number"
    if isinstance(v, Scalar):
        return "function"
    if isinstance(v, Form):
        return f"{v.degree}-form"
    if isinstance(v, Multivector):
        return f"{v.degree}-vector"
    if isinstance(v, AtiyahForm):
        return f"Atiyah {v.degree}-form"
    return type(v).__name__


# ---- rendering values in document syntax ---------------------------------------------------

def show_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, Fraction)):
        return str(v)
    if isinstance(v, Gauss):
        return render(Chart(()).const(v.re, v.im))
    if isinstance(v, Scalar):
        return render(v)
    if isinstance(v, (Form, Multivector)):
        return C.render_anti(v)
    if isinstance(v, AtiyahForm):
        return render_atiyah(v)
    if isinstance(v, Derivation):
        return render_derivation(v)
    if isinstance(v, O.OmniSection):
        return f"sec({render_derivation(v.D)}, {render_atiyah(v.psi)})"
    if isinstance(v, O.Frame):
        return "frame(" + ", ".join(show_value(g) for g in v.gens) + ")"
    if isinstance(v, JB.JacobiPair):
        return f"jacobi({show_value(v.Lam)}, {show_value(v.E)})"
    if isinstance(v, JB.HomPoisson):
        return f"hom_poisson({show_value(v.pi)}, {show_value(v.Z)})"
    if isinstance(v, JB.InverseJacobi):
        return f"inverse({show_value(v.omega)}, {show_value(v.theta)})"
    if isinstance(v, GC.Classification):
        return v.kind
    return str(v)


# ---- evaluation ----------------------------------------------------------------------------

def evaluate(e: Expr, env: Env):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Name):
        return resolve(e.id, env)
    if isinstance(e, Vec):
        chart = env.require_chart()
        if e.coord not in chart:
            raise UnknownIdentifier(f"@{e.coord}: {e.coord!r} is not a coordinate of {chart}")
        return C.partial(chart, e.coord)
    if isinstance(e, Neg):
        v = evaluate(e.operand, env)
        return -v
    if isinstance(e, BinOp):
        return binop(e.op, evaluate(e.left, env), evaluate(e.right, env), env)
    if isinstance(e, Call):
        return call(e, env)
    raise EvalError(f"cannot evaluate {e!r}")


def resolve(name: str, env: Env):
    if name in env.values:
        return env.values[name]
    if name == "i":
        return Gauss(0, 1)
    chart = env.chart
    if chart is not None:
        if name == "j":
            return AtiyahForm.j(chart)
        if name == "one":
            return Derivation(C.zero_multivector(chart, 1), chart.one)
        if name in chart:
            return chart.coord(name)
        if name.startswith("d") and name[1:] in chart:
            return C.dcoord(chart, name[1:])
    raise UnknownIdentifier(f"unknown identifier {name!r}")


def _promote_pair(a, b, chart: Chart):
    """Bring ``a`` and ``b`` to a common kind for ``+``."""
    if isinstance(a, int) and isinstance(b, int):
        return a, b
    types = {type(a), type(b)}
    if AtiyahForm in types or (Form in types and Scalar in types):
        deg = a.degree if isinstance(a, (AtiyahForm, Form)) else b.degree
        return to_atiyah(a, chart, deg), to_atiyah(b, chart, deg)
    if Derivation in types or (Multivector in types and Scalar in types):
        return to_derivation_any(a, chart), to_derivation_any(b, chart)
    if Form in types:
        d = a.degree if isinstance(a, Form) else b.degree
        return to_form(a, chart, d), to_form(b, chart, d)
    if Multivector in types:
        d = a.degree if isinstance(a, Multivector) else b.degree
        return to_vector(a, chart, d), to_vector(b, chart, d)
    if Scalar in types:
        return to_scalar(a, chart), to_scalar(b, chart)
    return a, b


def to_derivation_any(v, chart: Chart) -> Derivation:
    if isinstance(v, Scalar) and not v.is_zero():
        raise EvalError("cannot add a function to a derivation; use f*one")
    return to_derivation(v, chart)


def _chart_for(a, b, env: Env) -> Chart:
    ca, cb = _chart_of(a), _chart_of(b)
    if ca is not None and cb is not None and ca is not cb:
        raise ChartMismatch(f"{ca} vs {cb}")
    return ca or cb or env.require_chart()


def binop(op: str, a, b, env: Env):
    if isinstance(a, NUMBER) and isinstance(b, NUMBER):
        return _numeric(op, a, b)
    chart = _chart_for(a, b, env)
    if op in "+-":
        a, b = _promote_pair(a, b, chart)
        return a + b if op == "+" else a - b
    if op == "*":
        if isinstance(a, (int, Fraction, Gauss, Scalar)):
            return _scale(to_scalar(a, chart), b, chart)
        if isinstance(b, (int, Fraction, Gauss, Scalar)):
            return _scale(to_scalar(b, chart), a, chart)
        raise EvalError(f"'*' needs a function on one side; got {kind(a)} and {kind(b)} (use '^')")
    if op == "/":
        d = to_scalar(b, chart)
        if isinstance(a, (int, Fraction, Gauss, Scalar)):
            return to_scalar(a, chart) / d
        return _scale(d.inverse(), a, chart)
    if op == "^":
        if isinstance(a, (int, Fraction, Gauss, Scalar)) and isinstance(b, int):
            return to_scalar(a, chart) ** b
        return _wedge(a, b, chart)
    raise EvalError(f"unknown operator {op}")


def _numeric(op: str, a, b):
    a, b = Gauss.of(a), Gauss.of(b)
    if op == "+":
        r = a + b
    elif op == "-":
        r = a - b
    elif op == "*":
        r = a * b
    elif op == "/":
        r = a / b
    elif op == "^" and b.im == 0 and b.re.denominator == 1:
        if a == 0 and b.re < 0:
            raise EvalError("division by zero")
        r = a ** int(b.re)
    else:
        raise EvalError(f"cannot apply {op!r} to numbers")
    return r.simplify()


def _scale(s: Scalar, v, chart: Chart):
    if isinstance(v, (int, Fraction, Gauss, Scalar)):
        return s * to_scalar(v, chart)
    if isinstance(v, (Form, Multivector, AtiyahForm, Derivation, O.OmniSection, Endo)):
        return v.scale(s)
    raise EvalError(f"cannot scale {kind(v)}")


def _wedge(a, b, chart: Chart):
    if isinstance(a, Form) and isinstance(b, Form):
        return a.wedge(b)
    if isinstance(a, Multivector) and isinstance(b, Multivector):
        return a.wedge(b)
    if isinstance(a, (AtiyahForm, Form, Scalar, int, Fraction, Gauss)) and isinstance(b, (AtiyahForm, Form, Scalar, int, Fraction, Gauss)):
        return to_atiyah(a, chart).wedge(to_atiyah(b, chart))
    raise EvalError(f"cannot wedge {kind(a)} with {kind(b)}")


# ---- builtin functions ------------------------------------------------------------------------

BUILTINS: dict[str, Callable] = {}
# positions from which arguments are taken as bare names
RAW_FROM = {"canonical": 0, "backward_embedding": 1}


def builtin(name: str):
    def deco(fn):
        BUILTINS[name] = fn
        return fn
    return deco


def raw_args(args, start: int | None, env: Env) -> list:
    out = []
    for k, a in enumerate(args):
        if start is not None and k >= start and isinstance(a, Name):
            out.append(a.id)
        else:
            out.append(evaluate(a, env))
    return out


def call(e: Call, env: Env):
    fn = BUILTINS.get(e.func)
    if fn is None:
        raise UnknownIdentifier(f"unknown function {e.func!r}")
    args = raw_args(e.args, RAW_FROM.get(e.func), env)
    kwargs = {k: evaluate(v, env) for k, v in e.kwargs}
    out = fn(env, *args, **kwargs)
    if isinstance(out, O.Frame):
        out = out.with_samples(env.samples_for(out.chart))
    return out


def _chart_arg(env: Env, *vals) -> Chart:
    for v in vals:
        c = _chart_of(v)
        if c is not None:
            return c
    return env.require_chart()


@builtin("canonical")
def _canonical(env, name, d=None, n=None, size=None):
    k = next((x for x in (d, n, size) if x is not None), 1)
    if not isinstance(name, str):
        raise EvalError("canonical expects a structure name")
    coords = env.chart.names if env.chart is not None else None
    try:
        return G.canonical(name, int(k), coords)
    except ValueError:
        if coords is None:
            raise
        raise ChartMismatch(f"{name} with size {k} does not fit the current chart {env.chart}") from None


@builtin("jacobi")
def _jacobi(env, Lam, E=0):
    ch = _chart_arg(env, Lam, E)
    return JB.JacobiPair(to_vector(Lam, ch, 2), to_vector(E, ch, 1))


@builtin("hom_poisson")
def _hom_poisson(env, pi, Z=0):
    ch = _chart_arg(env, pi, Z)
    return JB.HomPoisson(to_vector(pi, ch, 2), to_vector(Z, ch, 1))


@builtin("hom_gc")
def _hom_gc(env, A, pi=0, sigma=0, Z=0, zeta=0):
    ch = _chart_arg(env, A, pi, sigma, Z, zeta)
    if isinstance(A, (int, Scalar)):
        A = Endo.zero(ch)
    return GC.HomGC(A, to_vector(pi, ch, 2), to_form(sigma, ch, 2), to_vector(Z, ch, 1), to_form(zeta, ch, 1))


@builtin("jet")
def _jet(env, eta, g=0):
    ch = _chart_arg(env, eta, g)
    return AtiyahForm.make(to_form(eta, ch, 1), C.scalar_form(to_scalar(g, ch)))


@builtin("sec")
def _sec(env, D=0, psi=0):
    ch = _chart_arg(env, D, psi)
    return O.OmniSection(to_derivation(D, ch), to_atiyah(psi, ch, 1))


@builtin("frame")
def _frame(env, *gens):
    if not gens:
        raise EvalError("frame needs at least one section")
    ch = _chart_arg(env, *gens)
    return O.make_frame(ch, [g if isinstance(g, O.OmniSection) else _sec(env, g) for g in gens])


@builtin("graph")
def _graph(env, J, E=None):
    if isinstance(J, JB.JacobiPair):
        return O.graph_jacobi(J.Lam, J.E)
    if isinstance(J, (AtiyahForm, Form)):
        return O.graph_atiyah(to_atiyah(J, J.chart))
    ch = _chart_arg(env, J, E)
    return O.graph_jacobi(to_vector(J, ch, 2), to_vector(E if E is not None else 0, ch, 1))


@builtin("dr_frame")
def _dr(env, like=None):
    return O.dr_frame(_chart_arg(env, like))


@builtin("jet_frame")
def _jf(env, like=None):
    return O.jet_frame(_chart_arg(env, like))


@builtin("bfield")
def _bfield(env, B, target, check=1):
    B = to_atiyah(B, _chart_arg(env, B))
    if isinstance(target, O.Frame):
        return O.frame_bfield(B, target, check=bool(check))
    return O.bfield(B, target, check=bool(check))


@builtin("contact_op")
def _contact_op(env, J, E=None):
    if isinstance(J, JB.JacobiPair):
        return GC.contact_operator(J.Lam, J.E)
    ch = _chart_arg(env, J, E)
    return GC.contact_operator(to_vector(J, ch, 2), to_vector(E if E is not None else 0, ch, 1))


@builtin("complex_op")
def _complex_op(env, phi):
    return GC.complex_operator(phi, _matrix_chart(phi))


@builtin("bfield_op")
def _bfield_op(env, K, B):
    return GC.bfield_operator(K, to_atiyah(B, K.chart))


@builtin("eigenframe")
def _eigenframe(env, K):
    return GC.eigenframe(K)


@builtin("build_L_JZ")
def _blj(env, h):
    return GC.build_L_JZ(h)


@builtin("hom_poisson_frame")
def _hpf(env, pi, Z=None):
    if isinstance(pi, JB.HomPoisson):
        return hom_poisson_frame(pi.pi, pi.Z)
    ch = _chart_arg(env, pi, Z)
    return hom_poisson_frame(to_vector(pi, ch, 2), to_vector(Z if Z is not None else 0, ch, 1))


@builtin("nacs")
def _nacs(env, f=0, n=1):
    ch = env.require_chart()
    return G.nacs_normal_form(to_scalar(f, ch), int(n))


@builtin("to_phi")
def _to_phi(env, t):
    return NA.to_phi(t)


@builtin("gauge")
def _gauge(env, t, f):
    if isinstance(t, NA.ACQuadruple):
        return NA.gauge_transform(t, to_scalar(f, t.chart))
    return NA.gauge_conjugate(t, to_scalar(f, _matrix_chart(t)))


@builtin("d")
def _d(env, w):
    if isinstance(w, AtiyahForm):
        return atiyah_d(w)
    if isinstance(w, (int, Scalar)):
        w = C.scalar_form(to_scalar(w, env.require_chart()))
    return C.d(w)


@builtin("dD")
def _dD(env, w):
    return atiyah_d(to_atiyah(w, _chart_arg(env, w)))


@builtin("conj")
def _conj(env, v):
    if isinstance(v, Gauss):
        return Gauss(v.re, -v.im)
    if isinstance(v, (int, Fraction)):
        return v
    return v.conj()


@builtin("pair")
def _pair(env, a, b):
    return O.omni_pair(a, b)


@builtin("dorfman")
def _dorfman(env, a, b):
    return O.dorfman(a, b)


@builtin("star")
def _star(env, F1, F2):
    return O.star(F1, F2)


@builtin("flat_product")
def _flat(env, F1, F2):
    return O.flat_product(F1, F2)


@builtin("backward_projection")
def _bproj(env, F):
    ch = env.require_chart()
    return O.backward_projection(F, ch, env.samples_for(ch))


@builtin("backward_embedding")
def _bemb(env, F, *names):
    if not all(isinstance(n, str) for n in names):
        raise EvalError("backward_embedding expects coordinate names")
    return O.backward_embedding(F, list(names))


@builtin("split_contact")
def _split_contact(env, h, Z=None, d=1):
    if isinstance(h, JB.HomPoisson):
        return JB.split_contact(h.pi, h.Z, int(d))
    ch = _chart_arg(env, h, Z)
    return JB.split_contact(to_vector(h, ch, 2), to_vector(Z if Z is not None else 0, ch, 1), int(d))


@builtin("split_lcs")
def _split_lcs(env, J, E=None, d=1):
    if isinstance(J, JB.JacobiPair):
        return JB.split_lcs(J.Lam, J.E, int(d))
    ch = _chart_arg(env, J, E)
    return JB.split_lcs(to_vector(J, ch, 2), to_vector(E if E is not None else 0, ch, 1), int(d))


@builtin("invert_jacobi")
def _invert(env, J):
    return JB.invert_jacobi(J.Lam, J.E)


@builtin("lcs_to_jacobi")
def _lcs(env, Omega, gamma=0):
    ch = _chart_arg(env, Omega, gamma)
    return JB.lcs_to_jacobi(to_form(Omega, ch, 2), to_form(gamma, ch, 1))


@builtin("dbar_D")
def _dbar(env, w):
    return DB.dbar_D(to_atiyah(w, _chart_arg(env, w)))


@builtin("partial_D")
def _partial(env, w):
    return DB.partial_D(to_atiyah(w, _chart_arg(env, w)))


@builtin("omega")
def _omega(env, inv):
    return inv.omega


@builtin("theta")
def _theta(env, inv):
    return inv.theta


def _matrix_chart(phi) -> Chart:
    try:
        return phi[0][0].chart
    except (TypeError, IndexError, AttributeError):
        raise EvalError("expected a gauge endomorphism matrix") from None
