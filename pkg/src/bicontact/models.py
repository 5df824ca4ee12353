"""Concrete charts and flows the laboratory ships with.

Three model families:

* ``FlowBoxModel`` -- the normal form around a curve tangent to the flow:
  alpha_minus = dw + v ds, alpha_plus = ds - b(s,v,w) dv with b = 0 on the
  w = 0 annulus and db/dw > 0.  Default b = tan(w), which makes this model
  the local face of the geodesic-flow chart below.

* ``LambdaModel`` -- the chart around the lift of a simple closed geodesic:
  exponential-weight rotating coframe (alpha_minus, alpha_plus, beta_plus)
  whose Reeb fields V, H, X form the model frame.  The flow direction X is
  the Reeb field of beta_plus; the closed orbit sits at w = pi/2, v = 0.

* ``T3Model`` -- the classical pair of rotating contact forms on the
  3-torus, transverse after a nonvanishing dz-perturbation.  It directs a
  flow that is provably not hyperbolic, so it serves as the negative
  control: the pair validates as bi-contact and nothing more is claimed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import autodiff as ad
from .charts import TWO_PI, Chart, GridSpec, flow_box_chart, torus_chart
from .contact import BiContact, reeb_field, transversality_report, verify_contact
from .errors import ValidationError
from .fields import (OneForm, ScalarField, VectorField, constant, coordinate,
                     lie_bracket, one_form, vector_field)
from .reports import VerificationReport, residual_report


# ---------------------------------------------------------------------------
# flow box


@dataclass(frozen=True)
class FlowBoxModel:
    delta: float
    eps: float
    tau: float
    chart: Chart
    b: ScalarField
    bicontact: BiContact

    @property
    def alpha_minus(self) -> OneForm:
        return self.bicontact.alpha_minus

    @property
    def alpha_plus(self) -> OneForm:
        return self.bicontact.alpha_plus


def flow_box_bicontact(b=None, delta: float = 0.4, eps: float = 1.55,
                       tau: float | None = None,
                       grid: GridSpec = GridSpec.cube(16),
                       validate: bool = True) -> FlowBoxModel:
    """Build and validate the flow-box normal form.

    ``b`` may be a ScalarField on a compatible chart, a callable, or None
    for the default tan(w).  Validation checks b = 0 on the w = 0 annulus,
    db/dw > 0 on the box, and both contact signs; the first violation
    raises ValidationError with its location.
    """
    chart = flow_box_chart(delta, eps)
    if b is None:
        bf = ScalarField(chart, lambda s, v, w: ad.tan(w), "tan(w)")
    elif isinstance(b, ScalarField):
        bf = ScalarField(chart, b.fn, b.name)
    else:
        bf = ScalarField(chart, b, "b")

    alpha_minus = one_form(chart, (coordinate(chart, "v"), 0.0, 1.0), "dw+v*ds")
    alpha_plus = OneForm(chart, (constant(chart, 1.0), -bf, constant(chart, 0.0)),
                         "ds-b*dv")
    model = FlowBoxModel(delta, eps, tau if tau is not None else delta, chart,
                         bf, BiContact(alpha_minus, alpha_plus))
    if validate:
        pts = grid.points(chart)
        ones = 0.0 * np.asarray(pts[0])
        on_annulus = np.abs(np.asarray(bf(pts[0], pts[1], 0.0 * np.asarray(pts[2])),
                                       dtype=float) + ones)
        if np.any(on_annulus > grid.zero_tol):
            idx = int(np.argmax(on_annulus))
            raise ValidationError("b must vanish on the w=0 annulus",
                                  point=(float(pts[0][idx]), float(pts[1][idx]), 0.0))
        dbdw = np.asarray(bf.gradient(*pts)[2], dtype=float) + ones
        if np.any(dbdw <= 0.0):
            idx = int(np.argmin(dbdw))
            raise ValidationError("db/dw must be positive on the box",
                                  point=tuple(float(p[idx]) for p in pts))
        for rep in model.bicontact.validate(grid):
            if not rep.passed:
                raise ValidationError(f"flow-box validation failed: {rep}",
                                      point=rep.argmin)
    return model


# ---------------------------------------------------------------------------
# geodesic-flow chart


@dataclass(frozen=True)
class LambdaModel:
    chart: Chart
    alpha_minus: OneForm
    alpha_plus: OneForm
    beta_plus: OneForm
    V: VectorField
    H: VectorField
    X: VectorField
    eps_gamma: float = math.pi / 2.0  # w-height of the closed orbit

    @property
    def bicontact(self) -> BiContact:
        return BiContact(self.alpha_minus, self.alpha_plus)

    def closed_orbit_point(self):
        return (0.0, 0.0, self.eps_gamma)

    def closed_orbit_period(self) -> float:
        return TWO_PI

    def invariant_volume_divergence(self) -> ScalarField:
        """Divergence of X against the volume form preserved by the flow
        (the contact volume of beta_plus, density exp(v^2) here)."""
        chart = self.chart

        def fn(s, v, w):
            acc = 0.0
            for i in range(3):
                r = self.X.components[i].fn(*ad.seed((s, v, w), i))
                acc = acc + (r.eps if isinstance(r, ad.Dual) else 0.0)
            # density term: X^v * d(ln rho)/dv with rho = exp(v^2)
            acc = acc + self.X.components[1](s, v, w) * 2.0 * v
            return acc
        return ScalarField(chart, fn, "div_mu(X)")


def lambda_chart(v_range=(-0.8, 0.8), w_range=(-2.0, 2.0)) -> LambdaModel:
    """The geodesic-flow chart with its rotating exponential coframe."""
    chart = Chart(
        coord_names=("s", "v", "w"),
        ranges=((0.0, TWO_PI), tuple(v_range), tuple(w_range)),
        periodic=(True, False, False),
        volume_order=("s", "v", "w"),
    )

    E = ScalarField(chart, lambda s, v, w: ad.exp(0.5 * v * v), "exp(v^2/2)")
    Einv = ScalarField(chart, lambda s, v, w: ad.exp(-0.5 * v * v), "exp(-v^2/2)")
    cw = ScalarField(chart, lambda s, v, w: ad.cos(w), "cos(w)")
    sw = ScalarField(chart, lambda s, v, w: ad.sin(w), "sin(w)")
    vf = coordinate(chart, "v")

    alpha_minus = one_form(chart, (vf, 0.0, 1.0), "dw+v*ds")
    alpha_plus = OneForm(chart, (E * cw, -(E * sw), constant(chart, 0.0)), "alpha_plus")
    beta_plus = OneForm(chart, (-(E * sw), -(E * cw), constant(chart, 0.0)), "beta_plus")

    V = vector_field(chart, (0.0, 0.0, 1.0), "V")
    H = VectorField(chart, (Einv * cw, -(Einv * sw), -(vf * Einv * cw)), "H")
    X = VectorField(chart, (-(Einv * sw), -(Einv * cw), vf * Einv * sw), "X")
    return LambdaModel(chart, alpha_minus, alpha_plus, beta_plus, V, H, X)


def frame_fields(model: LambdaModel, n_points: int = 1000, seed: int = 0,
                 tol: float = 1e-7):
    """The model frame with its strong directions e+ = V + H, e- = V - H,
    and the empirically recorded bracket signs.

    Each bracket relation is matched against +/- its nominal target.  Two
    of the three are exact sign matches throughout the chart; the third,
    [H, X] against V, carries the conformal factor exp(-v^2) and is an
    exact sign match only on the v = 0 torus.  The returned record stores,
    per relation, the sign, the residual on the torus, and the off-torus
    residual of the conformally corrected identity.
    """
    chart = model.chart
    V, H, X = model.V, model.H, model.X
    e_plus = VectorField(chart, tuple(a + b for a, b in zip(V.components, H.components)), "e+")
    e_minus = VectorField(chart, tuple(a - b for a, b in zip(V.components, H.components)), "e-")

    rng = np.random.default_rng(seed)
    pts3 = _random_points(chart, rng, n_points)
    pts_torus = (rng.uniform(0, TWO_PI, n_points),
                 np.zeros(n_points),
                 rng.uniform(chart.ranges[2][0], chart.ranges[2][1], n_points))

    def eval_vf(Y, pts):
        return np.stack([np.asarray(c(*pts), dtype=float) + 0.0 * np.asarray(pts[0])
                         for c in Y.components])

    record = {}
    for name, bracket, target in (("[V,X]~H", lie_bracket(V, X), H),
                                  ("[H,X]~V", lie_bracket(H, X), V),
                                  ("[H,V]~X", lie_bracket(H, V), X)):
        bt = eval_vf(bracket, pts_torus)
        tt = eval_vf(target, pts_torus)
        res_plus = float(np.max(np.linalg.norm(bt - tt, axis=0)))
        res_minus = float(np.max(np.linalg.norm(bt + tt, axis=0)))
        sign = 1 if res_plus <= res_minus else -1
        torus_residual = min(res_plus, res_minus)
        if torus_residual > tol:
            raise ValidationError(
                f"bracket relation {name} fails on the torus: {torus_residual:.3e}")
        b3 = eval_vf(bracket, pts3)
        t3 = eval_vf(target, pts3)
        off = float(np.max(np.linalg.norm(b3 - sign * t3, axis=0)))
        conf = np.exp(-np.asarray(pts3[1]) ** 2)
        off_conformal = float(np.max(np.linalg.norm(b3 - sign * conf * t3, axis=0)))
        record[name] = {"sign": sign, "torus_residual": torus_residual,
                        "chart_residual": off,
                        "conformal_chart_residual": off_conformal}
    return e_plus, e_minus, record


def _random_points(chart: Chart, rng, n):
    return tuple(rng.uniform(chart.ranges[i][0], chart.ranges[i][1], n)
                 for i in range(3))


# ---------------------------------------------------------------------------
# 3-torus pair


@dataclass(frozen=True)
class T3Model:
    n: int
    m: int
    chart: Chart
    bicontact: BiContact
    margin_report: VerificationReport


def t3_bicontact(n: int = 1, m: int = 1, eps_profile=0.1,
                 grid: GridSpec = GridSpec.cube(32)) -> T3Model:
    """The rotating pair on the 3-torus with a dz-perturbation.

    ``eps_profile`` is a constant or a callable of z; it must not vanish on
    the four tori z = 0, 1/4, 1/2, 3/4 where the unperturbed kernels touch.
    The constructed pair is grid-validated (both contact signs, kernel
    transversality); failure raises ValidationError carrying the offending
    sample, which for a bad profile sits on one of those tori.
    """
    if n < 1 or m < 1:
        raise ValidationError("winding integers n, m must be >= 1")
    chart = torus_chart()
    if callable(eps_profile):
        epsf = ScalarField(chart, lambda x, y, z: eps_profile(z), "eps(z)")
    else:
        epsf = constant(chart, float(eps_profile), "eps")

    for z0 in (0.0, 0.25, 0.5, 0.75):
        if abs(epsf.at((0.0, 0.0, z0))) < 1e-12:
            raise ValidationError(
                "perturbation profile vanishes on a tangency torus", point=(0.0, 0.0, z0))

    two_n = 2.0 * math.pi * n
    two_m = 2.0 * math.pi * m
    alpha_plus = OneForm(chart, (
        ScalarField(chart, lambda x, y, z: ad.cos(two_n * z), "cos(2n pi z)"),
        ScalarField(chart, lambda x, y, z: -ad.sin(two_n * z), "-sin(2n pi z)"),
        epsf), "alpha_plus[t3]")
    alpha_minus = OneForm(chart, (
        ScalarField(chart, lambda x, y, z: ad.cos(two_m * z), "cos(2m pi z)"),
        ScalarField(chart, lambda x, y, z: ad.sin(two_m * z), "sin(2m pi z)"),
        constant(chart, 0.0)), "alpha_minus[t3]")

    bi = BiContact(alpha_minus, alpha_plus)
    reports = bi.validate(grid)
    for rep in reports:
        if not rep.passed:
            raise ValidationError(f"t3 pair fails {rep.check}: value {rep.value:.3e}",
                                  point=rep.argmin)
    return T3Model(n, m, chart, bi, reports[2])


# ---------------------------------------------------------------------------
# embedded curves


@dataclass(frozen=True)
class EmbeddedCurve:
    """A parametrized loop in a chart with exact tangent access."""

    chart: Chart
    point_fn: object   # theta -> coordinate triple, dual-transparent
    period: float
    name: str = ""

    def point(self, theta):
        return self.point_fn(theta)

    def tangent(self, theta):
        out = self.point_fn(ad.Dual(theta, 1.0))
        return tuple(o.eps if isinstance(o, ad.Dual) else 0.0 for o in out)

    def closes(self, tol: float = 1e-9) -> bool:
        a = np.asarray(self.point(0.0), dtype=float)
        b = np.asarray(self.point(self.period), dtype=float)
        gap = a - b
        for i in range(3):
            if self.chart.periodic[i]:
                per = self.chart.period(i)
                gap[i] -= per * np.round(gap[i] / per)
        return bool(np.linalg.norm(gap) <= tol)


def legendrian_transverse_pushoff(model, w0: float, tol: float = 1e-9):
    """The s-circle at (v = 0, w = w0) with its tangency/transversality data.

    Returns (curve, margins) where margins = (|alpha_minus(tangent)| max,
    min |alpha_plus(tangent)| / (|tangent| |alpha_plus|)).  The tangent must
    lie in the negative kernel (first margin below tol) and stay transverse
    to the positive kernel (second margin above tol), otherwise
    ValidationError is raised.
    """
    if isinstance(model, LambdaModel):
        upper = model.eps_gamma
        if not (0.0 <= w0 < upper):
            raise ValidationError(f"pushoff height must lie in [0, {upper:g})")
    chart = model.chart
    bi = model.bicontact

    def pf(theta):
        return (theta + 0.0, 0.0 * theta, w0 + 0.0 * theta)

    curve = EmbeddedCurve(chart, pf, TWO_PI, f"pushoff(w0={w0:g})")
    thetas = np.linspace(0.0, TWO_PI, 64, endpoint=False)
    leg = []
    trans = []
    for th in thetas:
        p = tuple(float(x) for x in curve.point(th))
        t = np.asarray(curve.tangent(th), dtype=float)
        am = np.array([c.at(p) for c in bi.alpha_minus.coeffs])
        ap = np.array([c.at(p) for c in bi.alpha_plus.coeffs])
        leg.append(abs(am @ t))
        trans.append(abs(ap @ t) / (np.linalg.norm(t) * np.linalg.norm(ap)))
    leg_max = float(np.max(leg))
    trans_min = float(np.min(trans))
    if leg_max > tol:
        raise ValidationError(f"pushoff is not tangent to the negative kernel "
                              f"(residual {leg_max:.3e})")
    if trans_min <= tol:
        raise ValidationError(f"pushoff transversality margin {trans_min:.3e} "
                              f"below tolerance")
    return curve, (leg_max, trans_min)
