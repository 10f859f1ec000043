"""Exact complex rational functions on a named coordinate chart.

A scalar is stored as ``(P + iQ) / D`` with ``P, Q, D`` polynomials over
the rationals in graded-lex order.  The canonical form has
``gcd(P, Q, D) = 1`` and ``D`` monic, so structural equality is
mathematical equality.  Real scalars simply have ``Q = 0``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from .errors import (
    ChartMismatch,
    DenominatorVanishes,
    DivisionByZeroFunction,
    UnknownCoordinate,
)

RESERVED = frozenset({"i", "j", "one", "d"})


def _qq(value) -> "QQ.dtype":
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ(value)


class Chart:
    """Ordered tuple of coordinate names.  Charts are interned by name tuple."""

    _interned: dict[tuple[str, ...], "Chart"] = {}

    def __new__(cls, names: Iterable[str]):
        names = tuple(names)
        chart = cls._interned.get(names)
        if chart is not None:
            return chart
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate in chart {names}")
        for n in names:
            if not n.isidentifier() or n in RESERVED:
                raise ValueError(f"invalid coordinate name {n!r}")
        chart = super().__new__(cls)
        chart.names = names
        chart.dim = len(names)
        chart._index = {n: k for k, n in enumerate(names)}
        chart.ring = PolyRing(names, QQ, grlex) if names else None
        cls._interned[names] = chart
        return chart

    def __getnewargs__(self):
        return (self.names,)

    def __repr__(self) -> str:
        return f"Chart({', '.join(self.names)})"

    def __len__(self) -> int:
        return self.dim

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownCoordinate(name) from None

    def _poly(self, value):
        if self.ring is None:
            return _Ground(_qq(value))
        return self.ring(_qq(value))

    def const(self, re=0, im=0) -> "Scalar":
        return Scalar._raw(self, self._poly(re), self._poly(im), self._poly(1))

    def coord(self, name: str) -> "Scalar":
        k = self.index(name)
        g = self.ring.gens[k]
        return Scalar._raw(self, g, self.ring.zero, self.ring.one)

    def coords(self) -> list["Scalar"]:
        return [self.coord(n) for n in self.names]

    @property
    def zero(self) -> "Scalar":
        return self.const(0)

    @property
    def one(self) -> "Scalar":
        return self.const(1)

    @property
    def i(self) -> "Scalar":
        return self.const(0, 1)

    def union(self, other: "Chart") -> "Chart":
        extra = [n for n in other.names if n not in self._index]
        return Chart(self.names + tuple(extra))

    def without(self, names: Iterable[str]) -> "Chart":
        drop = set(names)
        for n in drop:
            self.index(n)
        return Chart(n for n in self.names if n not in drop)

    def contains_chart(self, other: "Chart") -> bool:
        return all(n in self._index for n in other.names)

    def origin(self) -> "SamplePoint":
        return SamplePoint(self, tuple(Fraction(0) for _ in self.names))

    def point(self, **values) -> "SamplePoint":
        for n in values:
            self.index(n)
        return SamplePoint(self, tuple(Fraction(values.get(n, 0)) for n in self.names))

    def default_samples(self, seed: int = 20240101, count: int = 3) -> list["SamplePoint"]:
        """Origin plus ``count`` pseudo-random rational points from a fixed seed."""
        rng = random.Random(seed)
        pts = [self.origin()]
        for _ in range(count):
            vals = tuple(Fraction(rng.randint(-7, 7), rng.randint(1, 5)) for _ in self.names)
            pts.append(SamplePoint(self, vals))
        return pts


class _Ground:
    """Stand-in polynomial for the zero-dimensional chart."""

    __slots__ = ("c",)

    def __init__(self, c):
        self.c = c

    is_ground = True

    @property
    def LC(self):
        return self.c

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        return isinstance(other, _Ground) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, o):
        return _Ground(self.c + o.c)

    def __sub__(self, o):
        return _Ground(self.c - o.c)

    def __mul__(self, o):
        return _Ground(self.c * o.c)

    def __neg__(self):
        return _Ground(-self.c)

    def mul_ground(self, c):
        return _Ground(self.c * c)

    def items(self):
        return [((), self.c)] if self.c else []

    def terms(self):
        return self.items()

    def __call__(self, *args):
        return self.c

    def diff(self, _):
        return _Ground(QQ(0))


@dataclass(frozen=True)
class SamplePoint:
    chart: Chart
    values: tuple[Fraction, ...]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.chart.names, self.values))

    def __str__(self) -> str:
        return "(" + ", ".join(f"{n}={v}" for n, v in zip(self.chart.names, self.values)) + ")"


def _tdeg(poly) -> int:
    return max((sum(m) for m, _ in poly.items()), default=0)


def _poly_gcd(a, b):
    if isinstance(a, _Ground):
        return a if a else b
    return a.gcd(b)


class Scalar:
    """Exact complex rational function ``(re_num + i*im_num) / den``."""

    __slots__ = ("chart", "pn", "qn", "den", "_hash")

    def __init__(self, *_):
        raise TypeError("use Chart.const / Chart.coord to build scalars")

    @classmethod
    def _raw(cls, chart: Chart, p, q, d) -> "Scalar":
        s = object.__new__(cls)
        s.chart = chart
        s.pn = p
        s.qn = q
        s.den = d
        s._hash = None
        return s

    @classmethod
    def _make(cls, chart: Chart, p, q, d) -> "Scalar":
        if not p and not q:
            one = chart._poly(1)
            return cls._raw(chart, p, q, one)
        if not d.is_ground:
            g = _poly_gcd(d, p)
            if q:
                g = _poly_gcd(g, q)
            if not g.is_ground:
                p = p.exquo(g)
                q = q.exquo(g) if q else q
                d = d.exquo(g)
        c = d.LC
        if c != 1:
            inv = QQ(1) / c
            p = p.mul_ground(inv)
            q = q.mul_ground(inv) if q else q
            d = d.mul_ground(inv)
        return cls._raw(chart, p, q, d)

    # ---- coercion -------------------------------------------------------
    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.chart is not self.chart:
                raise ChartMismatch(f"{self.chart} vs {other.chart}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.chart.const(other)
        return NotImplemented

    # ---- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return Scalar._make(self.chart, self.pn + o.pn, self.qn + o.qn, self.den)
        return Scalar._make(
            self.chart,
            self.pn * o.den + o.pn * self.den,
            self.qn * o.den + o.qn * self.den,
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(self.chart, -self.pn, -self.qn, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.qn and not o.qn:
            p, q = self.pn * o.pn, self.qn
        else:
            p = self.pn * o.pn - self.qn * o.qn
            q = self.pn * o.qn + self.qn * o.pn
        if self.den.is_ground and o.den.is_ground:
            return Scalar._make(self.chart, p, q, self.den * o.den)
        return Scalar._make(self.chart, p, q, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise DivisionByZeroFunction("division by the zero function")
        if not self.qn:
            return Scalar._make(self.chart, self.den, self.qn, self.pn)
        norm = self.pn * self.pn + self.qn * self.qn
        return Scalar._make(self.chart, self.pn * self.den, -(self.qn * self.den), norm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.chart.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # ---- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.pn and not self.qn

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_real(self) -> bool:
        return not self.qn

    def is_polynomial(self) -> bool:
        return self.den.is_ground

    def is_const(self) -> bool:
        return self.pn.is_ground and self.qn.is_ground and self.den.is_ground

    def const_value(self):
        """Value as an element of the Gaussian rationals when constant."""
        if not self.is_const():
            raise ValueError("scalar is not constant")
        return QQ_I(self.pn.LC if self.pn else 0, self.qn.LC if self.qn else 0) / QQ_I(self.den.LC, 0)

    def degree(self) -> int:
        return max(_tdeg(self.pn), _tdeg(self.qn), _tdeg(self.den))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.chart.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return (self.chart is other.chart and self.pn == other.pn
                and self.qn == other.qn and self.den == other.den)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.chart.names, frozenset(self.pn.items()),
                               frozenset(self.qn.items()), frozenset(self.den.items())))
        return self._hash

    # ---- complex structure ----------------------------------------------
    @property
    def re(self) -> "Scalar":
        return Scalar._make(self.chart, self.pn, self.qn - self.qn, self.den)

    @property
    def im(self) -> "Scalar":
        return Scalar._make(self.chart, self.qn, self.qn - self.qn, self.den)

    def conj(self) -> "Scalar":
        return Scalar._raw(self.chart, self.pn, -self.qn, self.den)

    # ---- calculus -------------------------------------------------------
    def diff(self, name: str) -> "Scalar":
        k = self.chart.index(name)
        g = self.chart.ring.gens[k]
        if self.den.is_ground:
            return Scalar._raw(self.chart, self.pn.diff(g), self.qn.diff(g), self.den)
        dd = self.den.diff(g)
        return Scalar._make(
            self.chart,
            self.pn.diff(g) * self.den - self.pn * dd,
            self.qn.diff(g) * self.den - self.qn * dd,
            self.den * self.den,
        )

    # ---- evaluation and change of chart -------------------------------------
    def evaluate(self, point: SamplePoint | Mapping[str, Fraction]):
        """Value at a rational point, as a Gaussian rational."""
        if isinstance(point, SamplePoint):
            if point.chart is not self.chart:
                point = point.as_dict()
            else:
                vals = [_qq(v) for v in point.values]
                return self._eval_vals(vals)
        vals = []
        for n in self.chart.names:
            if n not in point:
                raise UnknownCoordinate(n)
            vals.append(_qq(point[n]))
        return self._eval_vals(vals)

    def _eval_vals(self, vals):
        d = self.den(*vals)
        if not d:
            raise DenominatorVanishes(f"denominator of {self} vanishes")
        return QQ_I(self.pn(*vals), self.qn(*vals)) / QQ_I(d, 0)

    def lift(self, chart: Chart) -> "Scalar":
        """Re-read this scalar on a chart containing all of its coordinates."""
        if chart is self.chart:
            return self
        if not chart.contains_chart(self.chart):
            raise ChartMismatch(f"{self.chart} is not contained in {chart}")
        if self.chart.ring is None:
            c = self.const_value()
            return chart.const(Fraction(int(c.x.numerator), int(c.x.denominator)),
                               Fraction(int(c.y.numerator), int(c.y.denominator)))
        r = chart.ring
        p, q, d = self.pn.set_ring(r), self.qn.set_ring(r), self.den.set_ring(r)
        if d.is_ground:
            return Scalar._raw(chart, p, q, d)
        # a reordering of the variables can move the leading term of d
        return Scalar._make(chart, p, q, d)

    def restrict(self, zero_names: Sequence[str]) -> "Scalar":
        """Set the named coordinates to zero and drop them from the chart."""
        target = self.chart.without(zero_names)
        return self.substitute({n: 0 for n in zero_names}, target)

    def substitute(self, values: Mapping[str, object], target: Chart) -> "Scalar":
        """Compose with coordinate substitutions.

        ``values`` maps coordinate names of this chart to scalars on
        ``target`` or rational constants; names not mentioned are read as the
        same-named coordinate of ``target``.
        """
        imgs = []
        for n in self.chart.names:
            v = values.get(n) if n in values else None
            if v is None:
                imgs.append(target.coord(n))
            elif isinstance(v, Scalar):
                if v.chart is not target:
                    raise ChartMismatch(f"{v.chart} vs {target}")
                imgs.append(v)
            else:
                imgs.append(target.const(v))
        p = _compose(self.pn, imgs, target)
        q = _compose(self.qn, imgs, target)
        d = _compose(self.den, imgs, target)
        if d.is_zero():
            raise DenominatorVanishes(f"denominator of {self} vanishes after substitution")
        return (p + target.i * q) / d

    # ---- printing -------------------------------------------------------
    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        return render(self)


def _compose(poly, imgs: list[Scalar], target: Chart) -> Scalar:
    acc = target.zero
    cache: dict[tuple[int, int], Scalar] = {}
    for monom, coeff in poly.terms():
        term = target.const(Fraction(int(coeff.numerator), int(coeff.denominator)))
        for k, e in enumerate(monom):
            if e:
                key = (k, e)
                if key not in cache:
                    cache[key] = imgs[k] ** e
                term = term * cache[key]
        acc = acc + term
    return acc


def _fmt_coeff(c) -> str:
    num, den = int(c.numerator), int(c.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def render_poly(poly, names: Sequence[str]) -> str:
    if not poly:
        return "0"
    parts = []
    for monom, coeff in poly.terms():
        factors = []
        for n, e in zip(names, monom):
            if e == 1:
                factors.append(n)
            elif e:
                factors.append(f"{n}^{e}")
        mag = abs(coeff)
        sign = "-" if coeff < 0 else "+"
        if not factors:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _fmt_coeff(mag) + "*" + "*".join(factors)
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def render(s: Scalar) -> str:
    """Canonical text form, parseable by the document language."""
    names = s.chart.names
    p = render_poly(s.pn, names)
    if s.qn:
        q = render_poly(s.qn, names)
        num = f"{p} + i*({q})" if s.pn else f"i*({q})"
    else:
        num = p
    if s.den.is_ground:
        return num
    return f"({num})/({render_poly(s.den, names)})"


def gauss_to_fractions(z) -> tuple[Fraction, Fraction]:
    return (Fraction(int(z.x.numerator), int(z.x.denominator)),
            Fraction(int(z.y.numerator), int(z.y.denominator)))
