"""Evaluable coefficient fields and exact exterior calculus on a chart.

Coefficient functions take three positional arguments (the chart
coordinates, as floats, numpy arrays, or ``Dual`` numbers) and must be
built from operations that thread through duals: the arithmetic operators,
the primitives in :mod:`bicontact.autodiff`, and profile objects.  Under
that contract every gradient, exterior derivative, Lie bracket, and
pullback computed here is exact to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import autodiff as ad
from .autodiff import Dual
from .charts import Chart


def _as_field(chart: Chart, obj, name: str = "") -> "ScalarField":
    if isinstance(obj, ScalarField):
        return obj
    if callable(obj):
        return ScalarField(chart, obj, name)
    value = float(obj)
    return ScalarField(chart, lambda a, b, c, _v=value: _v + 0.0 * ad.value_of(a), name or f"{value:g}")


@dataclass(frozen=True)
class ScalarField:
    """A function on a chart with exact derivatives of any needed order."""

    chart: Chart
    fn: Callable
    name: str = ""

    def __call__(self, x1, x2, x3):
        return self.fn(x1, x2, x3)

    def at(self, point) -> float:
        return float(ad.value_of(self.fn(*point)))

    def gradient(self, x1, x2, x3):
        """Exact gradient as a component triple (broadcasts over arrays)."""
        args = (x1, x2, x3)
        out = []
        for i in range(3):
            r = self.fn(*ad.seed(args, i))
            out.append(r.eps if isinstance(r, Dual) else 0.0 * ad.value_of(x1))
        return tuple(out)

    def partial(self, i: int) -> "ScalarField":
        """The i-th coordinate derivative, itself an exact field."""
        def dfn(x1, x2, x3, _i=i):
            r = self.fn(*ad.seed((x1, x2, x3), _i))
            if isinstance(r, Dual):
                return r.eps
            return 0.0 * ad.value_of(x1)
        return ScalarField(self.chart, dfn, f"d{self.name}/d{self.chart.coord_names[i]}")

    # Algebra returns new fields; charts must match.

    def _binary(self, other, op, sym):
        g = _as_field(self.chart, other)
        return ScalarField(self.chart,
                           lambda a, b, c: op(self.fn(a, b, c), g.fn(a, b, c)),
                           f"({self.name}{sym}{g.name})")

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y, "-")

    def __rsub__(self, other):
        g = _as_field(self.chart, other)
        return g - self

    def __mul__(self, other):
        return self._binary(other, lambda x, y: x * y, "*")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda x, y: x / y, "/")

    def __neg__(self):
        return ScalarField(self.chart, lambda a, b, c: -self.fn(a, b, c), f"-{self.name}")


def constant(chart: Chart, value: float, name: str = "") -> ScalarField:
    return _as_field(chart, value, name or f"{value:g}")


def coordinate(chart: Chart, which: str) -> ScalarField:
    i = chart.index(which)
    return ScalarField(chart, lambda *args: args[i] + 0.0, which)


@dataclass(frozen=True)
class VectorField:
    chart: Chart
    components: tuple[ScalarField, ScalarField, ScalarField]
    name: str = ""

    def __call__(self, x1, x2, x3):
        return tuple(c(x1, x2, x3) for c in self.components)

    def at(self, point):
        return np.array([c.at(point) for c in self.components])

    def __neg__(self):
        return VectorField(self.chart, tuple(-c for c in self.components), f"-{self.name}")


def vector_field(chart: Chart, comps, name: str = "") -> VectorField:
    return VectorField(chart, tuple(_as_field(chart, c) for c in comps), name)


@dataclass(frozen=True)
class OneForm:
    chart: Chart
    coeffs: tuple[ScalarField, ScalarField, ScalarField]
    name: str = ""

    def coeff_values(self, x1, x2, x3):
        return tuple(c(x1, x2, x3) for c in self.coeffs)

    def __call__(self, Y: VectorField):
        """Pointwise pairing with a vector field, as a scalar field."""
        def fn(a, b, c):
            acc = 0.0
            for w, y in zip(self.coeffs, Y.components):
                acc = acc + w(a, b, c) * y(a, b, c)
            return acc
        return ScalarField(self.chart, fn, f"{self.name}({Y.name})")

    def __add__(self, other: "OneForm"):
        return OneForm(self.chart,
                       tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                       f"({self.name}+{other.name})")

    def __sub__(self, other: "OneForm"):
        return OneForm(self.chart,
                       tuple(a - b for a, b in zip(self.coeffs, other.coeffs)),
                       f"({self.name}-{other.name})")

    def scale(self, factor) -> "OneForm":
        f = _as_field(self.chart, factor)
        return OneForm(self.chart, tuple(f * c for c in self.coeffs), f"{f.name}*{self.name}")

    def __neg__(self):
        return OneForm(self.chart, tuple(-c for c in self.coeffs), f"-{self.name}")


def one_form(chart: Chart, coeffs, name: str = "") -> OneForm:
    return OneForm(chart, tuple(_as_field(chart, c) for c in coeffs), name)


@dataclass(frozen=True)
class TwoForm:
    """Coefficients against the ordered basis dx1^dx2, dx1^dx3, dx2^dx3."""

    chart: Chart
    coeffs: tuple[ScalarField, ScalarField, ScalarField]
    name: str = ""

    def __call__(self, Y: VectorField, Z: VectorField) -> ScalarField:
        c12, c13, c23 = self.coeffs
        y1, y2, y3 = Y.components
        z1, z2, z3 = Z.components

        def fn(a, b, c):
            yv = [y1(a, b, c), y2(a, b, c), y3(a, b, c)]
            zv = [z1(a, b, c), z2(a, b, c), z3(a, b, c)]
            return (c12(a, b, c) * (yv[0] * zv[1] - yv[1] * zv[0])
                    + c13(a, b, c) * (yv[0] * zv[2] - yv[2] * zv[0])
                    + c23(a, b, c) * (yv[1] * zv[2] - yv[2] * zv[1]))
        return ScalarField(self.chart, fn, f"{self.name}({Y.name},{Z.name})")

    def matrix_at(self, point) -> np.ndarray:
        c12, c13, c23 = (c.at(point) for c in self.coeffs)
        return np.array([[0.0, c12, c13], [-c12, 0.0, c23], [-c13, -c23, 0.0]])


@dataclass(frozen=True)
class ThreeForm:
    """A multiple of the chart's positive volume form."""

    chart: Chart
    coeff: ScalarField  # relative to the volume_order wedge
    name: str = ""

    def __call__(self, x1, x2, x3):
        return self.coeff(x1, x2, x3)


def exterior_derivative(omega: OneForm) -> TwoForm:
    """d of a 1-form; d(d(anything)) vanishes identically."""
    a1, a2, a3 = omega.coeffs
    c12 = a2.partial(0) - a1.partial(1)
    c13 = a3.partial(0) - a1.partial(2)
    c23 = a3.partial(1) - a2.partial(2)
    return TwoForm(omega.chart, (c12, c13, c23), f"d{omega.name}")


def wedge_d(alpha: OneForm) -> ThreeForm:
    """alpha ^ d(alpha), reported against the chart's positive volume form."""
    d = exterior_derivative(alpha)
    a1, a2, a3 = alpha.coeffs
    c12, c13, c23 = d.coeffs
    raw = a1 * c23 - a2 * c13 + a3 * c12  # coefficient on dx1^dx2^dx3
    sign = alpha.chart.volume_sign
    coeff = raw if sign == 1 else -raw
    return ThreeForm(alpha.chart, coeff, f"{alpha.name}^d{alpha.name}")


def differential(f: ScalarField) -> OneForm:
    return OneForm(f.chart, tuple(f.partial(i) for i in range(3)), f"d{f.name}")


def lie_bracket(Y: VectorField, Z: VectorField) -> VectorField:
    """[Y, Z] componentwise via exact Jacobians."""
    def comp(i):
        def fn(a, b, c):
            acc = 0.0
            for j in range(3):
                dZ = Z.components[i].fn(*ad.seed((a, b, c), j))
                dY = Y.components[i].fn(*ad.seed((a, b, c), j))
                dZ = dZ.eps if isinstance(dZ, Dual) else 0.0
                dY = dY.eps if isinstance(dY, Dual) else 0.0
                acc = acc + Y.components[j](a, b, c) * dZ - Z.components[j](a, b, c) * dY
            return acc
        return ScalarField(Y.chart, fn)
    return VectorField(Y.chart, tuple(comp(i) for i in range(3)),
                       f"[{Y.name},{Z.name}]")


@dataclass(frozen=True)
class ChartMap:
    """A map between charts with exact Jacobian access."""

    source: Chart
    target: Chart
    fn: Callable  # (x1,x2,x3) -> (y1,y2,y3), dual-transparent
    name: str = ""

    def __call__(self, x1, x2, x3):
        return self.fn(x1, x2, x3)

    def jacobian(self, x1, x2, x3):
        """J[k][i] = d(target_k)/d(source_i)."""
        rows = [[None] * 3 for _ in range(3)]
        for i in range(3):
            out = self.fn(*ad.seed((x1, x2, x3), i))
            for k in range(3):
                o = out[k]
                rows[k][i] = o.eps if isinstance(o, Dual) else 0.0 * ad.value_of(x1)
        return rows

    def compose(self, inner: "ChartMap") -> "ChartMap":
        """self after inner."""
        def fn(a, b, c):
            return self.fn(*inner.fn(a, b, c))
        return ChartMap(inner.source, self.target, fn, f"{self.name}.{inner.name}")


def identity_map(chart: Chart) -> ChartMap:
    return ChartMap(chart, chart, lambda a, b, c: (a + 0.0, b + 0.0, c + 0.0), "id")


def pullback_oneform(phi: ChartMap, omega: OneForm) -> OneForm:
    """phi^* omega, with coefficients evaluated through phi exactly."""
    def coeff(i):
        def fn(a, b, c):
            args = ad.seed((a, b, c), i)
            out = phi.fn(*args)
            vals = tuple(o.val if isinstance(o, Dual) else o for o in out)
            acc = 0.0
            for k in range(3):
                o = out[k]
                dk = o.eps if isinstance(o, Dual) else 0.0
                acc = acc + omega.coeffs[k](*vals) * dk
            return acc
        return ScalarField(phi.source, fn)
    return OneForm(phi.source, tuple(coeff(i) for i in range(3)),
                   f"{phi.name}*{omega.name}")
