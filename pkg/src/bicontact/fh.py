"""Contact surgery on an annulus transverse to a Reeb flow.

Chart (t, s, w): s parametrizes the surgered curve, w the annulus width,
and t the Reeb flow of the standard form gamma = dt + w ds (so the Reeb
field is d/dt and the annulus sits at t = 0).  Cutting at t = 0 and
regluing (s, w) to (s + g(w), w) with a monotone shear g running from 0 to
2 pi q is compensated by subtracting d(h), h = lam(t) * moment_g(w), on
the t >= 0 side.  The contact coefficient of the result is 1 - dh/dt.

For q > 0 the compensation fights the contact condition and the annulus
must be thin.  For q < 0 the shear is taken non-increasing, the moment
integral is then pointwise non-negative, and with the cutoff's slope
non-positive past the annulus the coefficient is at least 1 whatever the
annulus width.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import autodiff as ad
from .charts import Chart, GridSpec, transverse_box_chart
from .contact import contact_coefficient, reeb_field, verify_contact
from .errors import ValidationError
from .fields import OneForm, ScalarField, constant, coordinate, one_form, vector_field
from .profiles import CutoffProfile, ShearProfile
from .reports import VerificationReport, residual_report


def standard_transverse_form(chart: Chart) -> OneForm:
    """gamma = dt + w ds on a (t, s, w) chart; positive contact with
    coefficient +1 against dt^dw^ds."""
    return one_form(chart, (1.0, coordinate(chart, "w"), 0.0), "dt+w*ds")


@dataclass
class TransverseSurgeryResult:
    chart: Chart
    gamma: OneForm
    alpha_tilde: OneForm       # deformed form, valid on t >= 0
    shear: ShearProfile
    cutoff: CutoffProfile
    eps_annulus: float
    contact_report: VerificationReport

    def coefficient_field(self) -> ScalarField:
        return contact_coefficient(self.alpha_tilde)


def suggested_annulus_bound(q: int, t_support: float) -> float:
    """Classical sufficient annulus half-width for a positive twist,
    t_support / (2 pi q); the grid check typically admits more."""
    if q <= 0:
        return math.inf
    return t_support / (2.0 * math.pi * q)


def fh_surgery(q: int, eps_annulus: float, t_support: float = 1.5,
               t_half: float = 2.0, shear: ShearProfile | None = None,
               cutoff: CutoffProfile | None = None,
               grid: GridSpec = GridSpec.cube(32)) -> TransverseSurgeryResult:
    """Transverse-annulus surgery with its contact verification attached.

    The shear g spans [-eps_annulus, eps_annulus] with g(-eps) = 0 and
    g(eps) = 2 pi q (monotone non-decreasing for q > 0, non-increasing for
    q < 0); the cutoff lam lives on [0, t_support] in the flow direction.
    Contact failure is recorded in the report, not raised: it is the
    expected outcome for a positive twist on a too-wide annulus.
    """
    if eps_annulus <= 0:
        raise ValidationError("annulus half-width must be positive")
    if t_support >= t_half:
        raise ValidationError("cutoff support must fit inside the chart")
    chart = transverse_box_chart(t_half, eps_annulus * 1.05)
    gamma = standard_transverse_form(chart)
    g = shear if shear is not None else ShearProfile.transverse(q, eps_annulus)
    lam = cutoff if cutoff is not None else CutoffProfile.ramp(t_support)

    # alpha~ = gamma - d(lam(t) moment_g(w))
    def a_t(t, s, w):
        return 1.0 - lam.d1(t) * g.moment(w)

    def a_s(t, s, w):
        return w + 0.0 * ad.value_of(t)

    def a_w(t, s, w):
        return -lam.value(t) * w * g.d1(w)

    alpha_tilde = OneForm(chart, (ScalarField(chart, a_t), ScalarField(chart, a_s),
                                  ScalarField(chart, a_w)), "gamma-dh")
    upper = Chart(chart.coord_names,
                  ((0.0, t_half), chart.ranges[1], chart.ranges[2]),
                  chart.periodic, chart.volume_order)
    alpha_upper = OneForm(upper, tuple(ScalarField(upper, c.fn, c.name)
                                       for c in alpha_tilde.coeffs), alpha_tilde.name)
    report = verify_contact(alpha_upper, +1, grid, f"transverse surgery contact (q={q})")
    return TransverseSurgeryResult(chart, gamma, alpha_tilde, g, lam,
                                   eps_annulus, report)


def fh_reeb_check(result: TransverseSurgeryResult,
                  grid: GridSpec = GridSpec.cube(24),
                  tol: float = 1e-7) -> VerificationReport:
    """Verify the Reeb field of the deformed form against its closed form.

    For alpha~ = gamma - dh the Reeb field is the original one rescaled by
    1 / (1 - dh(R)); here dh(R) = dh/dt, so the check compares the
    numerically computed Reeb field against (1 - dh/dt)^{-1} d/dt
    componentwise.  The scale range over the grid is attached.
    """
    if not result.contact_report.passed:
        raise ValidationError("deformed form is not contact; no Reeb field to check")
    t0 = time.perf_counter()
    chart = result.chart
    upper = Chart(chart.coord_names,
                  ((0.0, chart.ranges[0][1]), chart.ranges[1], chart.ranges[2]),
                  chart.periodic, chart.volume_order)
    alpha = OneForm(upper, tuple(ScalarField(upper, c.fn, c.name)
                                 for c in result.alpha_tilde.coeffs))
    R = reeb_field(alpha)
    pts = grid.points(upper)
    ones = 1.0 + 0.0 * np.asarray(pts[0])

    lam, g = result.cutoff, result.shear
    dh_dt = np.asarray(lam.d1(pts[0]) * g.moment(pts[2]), dtype=float) * ones
    scale = 1.0 / (1.0 - dh_dt)

    comps = [np.asarray(c(*pts), dtype=float) * ones for c in R.components]
    residual = np.sqrt((comps[0] - scale) ** 2 + comps[1] ** 2 + comps[2] ** 2)
    rep = residual_report("reeb rescaling of deformed form", residual, tol, pts,
                          time.perf_counter() - t0,
                          details={"scale_min": float(np.min(scale)),
                                   "scale_max": float(np.max(scale))})
    return rep
