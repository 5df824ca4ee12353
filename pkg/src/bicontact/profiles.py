"""Shear and cutoff profiles used by the surgery constructions.

These are built-in piecewise objects rather than parsed expressions so
that smoothness bookkeeping (exact one-sided derivatives at junctions,
supremum norms, moment integrals) lives in code with closed forms.

Shear shape: the C^2 quintic smoothstep S(u) = 6u^5 - 15u^4 + 10u^3
carried across the annulus width, so sup|f'| = (15/8) pi |q| / delta.

Cutoff shape: a near-linear C^1 ramp with quadratic caps of width
rho * eps at both ends.  Peak slope is 1/(eps (1 - rho)), which realizes
"slope just above 1/eps" with the excess explicit; a plain smoothstep
(peak slope 1.5/eps) would halve the admissible annulus width for no
smoothness gain that matters here.  The caps also make the ramp's
derivative vanish at the support endpoints, which the exact seam
identities require.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import autodiff as ad

TWO_PI = 2.0 * math.pi


def _smoothstep_chain():
    def S(u):
        return u * u * u * (10.0 + u * (-15.0 + 6.0 * u))

    def S1(u):
        return 30.0 * u * u * (1.0 - u) ** 2

    def S2(u):
        return u * (120.0 * u * u - 180.0 * u + 60.0)

    def S3(u):
        return 360.0 * u * u - 360.0 * u + 60.0

    def SI(u):  # antiderivative of S with SI(0) = 0
        return u ** 4 * (u * u - 3.0 * u + 2.5)

    return S, S1, S2, S3, SI


_S, _S1, _S2, _S3, _SI = _smoothstep_chain()


@dataclass(frozen=True)
class ShearProfile:
    """Monotone C^2 shear across [-half, half] with fixed endpoint values.

    value(x) == 0 for x <= -half and value(x) == total for x >= half.
    For the tangent-annulus surgery total = -2 pi q (non-increasing when
    q > 0); for the transverse-annulus variant total = +2 pi q.  Values
    are circle-valued: the endpoint data is what matters, not a codomain.
    """

    q: int
    half: float
    total: float

    def __post_init__(self):
        if self.half <= 0:
            raise ValueError("shear half-width must be positive")

    @classmethod
    def tangent(cls, q: int, delta: float) -> "ShearProfile":
        return cls(q, delta, -TWO_PI * q)

    @classmethod
    def transverse(cls, q: int, eps: float) -> "ShearProfile":
        return cls(q, eps, TWO_PI * q)

    def _u(self, x):
        u = (x + self.half) / (2.0 * self.half)
        return np.clip(u, 0.0, 1.0)

    def _chain(self):
        h2 = 2.0 * self.half

        def f(x):
            return self.total * _S(self._u(x))

        def mask(x, expr):
            inside = (np.abs(x) < self.half)
            return np.where(inside, expr, 0.0)

        def f1(x):
            return mask(x, self.total * _S1(self._u(x)) / h2)

        def f2(x):
            return mask(x, self.total * _S2(self._u(x)) / h2 ** 2)

        def f3(x):
            return mask(x, self.total * _S3(self._u(x)) / h2 ** 3)

        return [f, f1, f2, f3]

    def value(self, x):
        return ad.apply_chain(self._chain(), x)

    def d1(self, x):
        return ad.apply_chain(self._chain()[1:], x)

    def d2(self, x):
        return ad.apply_chain(self._chain()[2:], x)

    @property
    def sup_d1(self) -> float:
        """sup|f'| = (15/8) pi |q| / half (peak of the quintic ramp)."""
        return abs(self.total) * (15.0 / 8.0) / (2.0 * self.half)

    def moment(self, x):
        """integral of t f'(t) dt from -half to x, in closed form.

        Vanishes at both endpoints (the integrand is odd) and peaks at the
        midpoint with magnitude (5/16) pi |q| half.
        """
        c = self.total * self.half

        def m(y):
            u = self._u(y)
            return c * ((2.0 * u - 1.0) * _S(u) - 2.0 * _SI(u))

        def m1(y):
            return y * ad.apply_chain(self._chain()[1:], y)

        def m2(y):
            return (ad.apply_chain(self._chain()[1:], y)
                    + y * ad.apply_chain(self._chain()[2:], y))

        return ad.apply_chain([m, m1, m2], x)

    @property
    def moment_peak(self) -> float:
        """max over x of |moment(x)| = (5/32)|total| half, attained at x = 0."""
        return abs(self.total) * self.half * (5.0 / 32.0)

    def samples(self, n: int = 33):
        xs = np.linspace(-self.half, self.half, n)
        return {"x": xs.tolist(),
                "value": np.asarray(self.value(xs)).tolist(),
                "d1": np.asarray(self.d1(xs)).tolist()}


@dataclass(frozen=True)
class CutoffProfile:
    """Monotone non-increasing cutoff: 1 on (-inf, 0], 0 on [eps, inf).

    kind "ramp" is the default near-linear C^1 shape with quadratic caps;
    kind "weighted" allocates slope proportional to available plane
    rotation (used by the negative-twist extension) and is C^1 on the open
    support only.  sup_d1 reports sup|lambda'|.
    """

    eps: float
    rho: float = 0.1
    kind: str = "ramp"
    chain: tuple = field(default=None, repr=False)  # type: ignore[assignment]
    sup_d1_override: float | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError("cutoff support width must be positive")
        if self.kind == "ramp" and not (0.0 < self.rho < 0.5):
            raise ValueError("cap fraction must lie in (0, 0.5)")

    @classmethod
    def ramp(cls, eps: float, rho: float = 0.1) -> "CutoffProfile":
        return cls(eps, rho, "ramp")

    @classmethod
    def from_chain(cls, eps: float, chain, sup_d1: float,
                   kind: str = "weighted") -> "CutoffProfile":
        return cls(eps, 0.0, kind, tuple(chain), sup_d1)

    def _ramp_chain(self):
        eps, a = self.eps, self.rho * self.eps
        m = 1.0 / (eps - a)

        def piece(x, inner_lo, inner_mid, inner_hi, lo=None, hi=None):
            lo_v = 1.0 if lo is None else lo
            hi_v = 0.0 if hi is None else hi
            return np.where(
                x <= 0.0, lo_v,
                np.where(x < a, inner_lo(np.minimum(x, a)),
                         np.where(x <= eps - a, inner_mid(x),
                                  np.where(x < eps, inner_hi(np.maximum(x, eps - a)),
                                           hi_v))))

        def v(x):
            return piece(x,
                         lambda t: 1.0 - m * t * t / (2.0 * a),
                         lambda t: 1.0 - m * (t - 0.5 * a),
                         lambda t: m * (eps - t) ** 2 / (2.0 * a))

        def d1(x):
            return piece(x,
                         lambda t: -m * t / a,
                         lambda t: -m + 0.0 * t,
                         lambda t: -m * (eps - t) / a,
                         lo=0.0, hi=0.0)

        def d2(x):
            return piece(x,
                         lambda t: -m / a + 0.0 * t,
                         lambda t: 0.0 * t,
                         lambda t: m / a + 0.0 * t,
                         lo=0.0, hi=0.0)

        def d3(x):
            return 0.0 * x

        return [v, d1, d2, d3]

    def _active_chain(self):
        if self.chain is not None:
            return list(self.chain)
        return self._ramp_chain()

    def value(self, x):
        return ad.apply_chain(self._active_chain(), x)

    def d1(self, x):
        return ad.apply_chain(self._active_chain()[1:], x)

    @property
    def sup_d1(self) -> float:
        if self.sup_d1_override is not None:
            return self.sup_d1_override
        return 1.0 / (self.eps * (1.0 - self.rho))

    def samples(self, n: int = 33):
        xs = np.linspace(0.0, self.eps, n)
        return {"x": xs.tolist(),
                "value": np.asarray(self.value(xs)).tolist(),
                "d1": np.asarray(self.d1(xs)).tolist()}


def tangent_weighted_cutoff(eps: float) -> CutoffProfile:
    """The rotation-weighted cutoff for a chart whose positive plane field
    rotates like tan(w): value(w) = 1 - tan(w)/tan(eps) on [0, eps].

    Continuous at both support endpoints, C^1 on the open support.  The
    peak slope sits at w = eps where the rotation is fastest.
    """
    if not (0.0 < eps < 0.5 * math.pi):
        raise ValueError("support must end before the rotation pole at pi/2")
    te = math.tan(eps)

    def clip(x):
        return np.clip(x, 0.0, eps)

    def v(x):
        xc = clip(x)
        return np.where(x <= 0.0, 1.0, np.where(x >= eps, 0.0, 1.0 - np.tan(xc) / te))

    def d1(x):
        xc = clip(x)
        sec2 = 1.0 / np.cos(xc) ** 2
        return np.where((x > 0.0) & (x < eps), -sec2 / te, 0.0 * x)

    def d2(x):
        xc = clip(x)
        sec2 = 1.0 / np.cos(xc) ** 2
        return np.where((x > 0.0) & (x < eps), -2.0 * sec2 * np.tan(xc) / te, 0.0 * x)

    def d3(x):
        xc = clip(x)
        sec2 = 1.0 / np.cos(xc) ** 2
        return np.where((x > 0.0) & (x < eps),
                        (-4.0 * sec2 * np.tan(xc) ** 2 - 2.0 * sec2 * sec2) / te,
                        0.0 * x)

    sup = (1.0 / math.cos(eps) ** 2) / te
    return CutoffProfile.from_chain(eps, [v, d1, d2, d3], sup, kind="weighted")
