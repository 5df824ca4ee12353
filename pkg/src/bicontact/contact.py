"""Contact conditions, Reeb fields, and positivity certificates.

Sign conventions: a 1-form is positive contact when the coefficient of
``alpha ^ d(alpha)`` against the chart's positive volume form is positive
everywhere, negative contact when it is negative.  A bi-contact pair is an
ordered (negative, positive) pair of contact forms with transverse kernels;
its intersection line field directs the flow under examination.

The certificate implemented here is sufficient-only: the Reeb field of the
negative form lying in quadrant I/III (or inside the positive kernel plane,
where permitted) certifies hyperbolicity of the directed flow.  A failed
certificate is never a disproof.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

import numpy as np

from .charts import Chart, GridSpec
from .errors import DegeneratePointError, ValidationError
from .fields import (OneForm, ScalarField, VectorField, exterior_derivative,
                     one_form, vector_field, wedge_d)
from .reports import VerificationReport, min_report, residual_report

DEGENERATE_TOL = 1e-12
ON_KERNEL_TOL = 1e-6


def contact_coefficient(alpha: OneForm) -> ScalarField:
    """Coefficient of alpha ^ d(alpha) against the chart volume form."""
    return wedge_d(alpha).coeff


def verify_contact(alpha: OneForm, required_sign: int, grid: GridSpec,
                   name: str | None = None) -> VerificationReport:
    """Grid check of the strict contact inequality.

    required_sign is +1 for positive contact, -1 for negative.  Non-finite
    coefficient values are a hard failure carrying the sample location.
    """
    t0 = time.perf_counter()
    pts = grid.points(alpha.chart)
    coeff = np.asarray(contact_coefficient(alpha)(*pts), dtype=float) + 0.0 * np.asarray(pts[0])
    bad = ~np.isfinite(coeff)
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise ValidationError(
            f"non-finite contact coefficient for {alpha.name or 'form'}",
            point=tuple(float(p[idx]) for p in pts))
    label = name or f"contact[{alpha.name}]{'>0' if required_sign > 0 else '<0'}"
    values = coeff if required_sign > 0 else -coeff
    return min_report(label, values, grid.margin, pts,
                      time.perf_counter() - t0,
                      details={"required_sign": required_sign})


def reeb_field(alpha: OneForm, tol: float = DEGENERATE_TOL) -> VectorField:
    """The unique R with d(alpha)(R, .) = 0 and alpha(R) = 1.

    The kernel direction of the antisymmetric d(alpha) matrix is the cross
    of its independent rows, and the same cross contracts with alpha to the
    contact coefficient, so R = (c23, -c13, c12) / coefficient.  Evaluation
    at a point where |coefficient| < tol raises DegeneratePointError.
    """
    d = exterior_derivative(alpha)
    c12, c13, c23 = d.coeffs
    a1, a2, a3 = alpha.coeffs

    def guard(den, a, b, c):
        vals = np.asarray(_strip(den))
        if np.any(np.abs(vals) < tol):
            idx = int(np.argmin(np.abs(vals)))
            pt = _point_from_args(a, b, c, idx)
            raise DegeneratePointError(
                f"contact coefficient below {tol:.1e} while computing a Reeb field",
                point=pt, value=float(vals.flat[idx] if vals.ndim else vals))

    def comp(which):
        def fn(a, b, c):
            den = (a1(a, b, c) * c23(a, b, c) - a2(a, b, c) * c13(a, b, c)
                   + a3(a, b, c) * c12(a, b, c))
            guard(den, a, b, c)
            if which == 0:
                return c23(a, b, c) / den
            if which == 1:
                return -c13(a, b, c) / den
            return c12(a, b, c) / den
        return ScalarField(alpha.chart, fn)

    return VectorField(alpha.chart, tuple(comp(i) for i in range(3)),
                       f"R[{alpha.name}]")


def _strip(x):
    from .autodiff import value_of
    return value_of(x)


def _point_from_args(a, b, c, idx):
    try:
        va, vb, vc = (np.asarray(_strip(x)) for x in (a, b, c))
        return (float(va.flat[idx % va.size]), float(vb.flat[idx % vb.size]),
                float(vc.flat[idx % vc.size]))
    except Exception:
        return None


def kernel_normals(alpha: OneForm):
    """Coefficient triple of alpha as the Euclidean normal of its kernel."""
    return alpha.coeffs


def transversality_margin(alpha_minus: OneForm, alpha_plus: OneForm,
                          grid: GridSpec) -> float:
    """Grid minimum of the sine of the angle between the two kernel planes."""
    rep = transversality_report(alpha_minus, alpha_plus, grid)
    return rep.value


def transversality_report(alpha_minus: OneForm, alpha_plus: OneForm,
                          grid: GridSpec) -> VerificationReport:
    t0 = time.perf_counter()
    chart = alpha_minus.chart
    pts = grid.points(chart)
    am = np.stack([np.asarray(c(*pts), dtype=float) + 0.0 * np.asarray(pts[0])
                   for c in alpha_minus.coeffs])
    ap = np.stack([np.asarray(c(*pts), dtype=float) + 0.0 * np.asarray(pts[0])
                   for c in alpha_plus.coeffs])
    nm = np.linalg.norm(am, axis=0)
    np_ = np.linalg.norm(ap, axis=0)
    if np.any(nm < DEGENERATE_TOL) or np.any(np_ < DEGENERATE_TOL):
        idx = int(np.argmin(np.minimum(nm, np_)))
        raise ValidationError("a form vanishes at a sample point",
                              point=tuple(float(p[idx]) for p in pts))
    cross = np.cross(am.T, ap.T).T
    sine = np.linalg.norm(cross, axis=0) / (nm * np_)
    return min_report("transversality(sin angle)", sine, grid.margin, pts,
                      time.perf_counter() - t0)


class Quadrant(enum.Enum):
    """Position of a vector relative to the two kernel planes.

    Quadrant I means both forms evaluate positively; II/IV are the mixed
    signs and III both negative.  The numbering is a convention (a flipped
    orientation can be requested), fixed so that the Reeb field of the
    negative form being dynamically positive reads as I/III.
    """

    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    ON_XI_MINUS = "on_xi_minus"
    ON_XI_PLUS = "on_xi_plus"
    ALONG_X = "along_X"


@dataclass(frozen=True)
class BiContact:
    """Ordered pair (negative contact, positive contact) of 1-forms."""

    alpha_minus: OneForm
    alpha_plus: OneForm

    @property
    def chart(self) -> Chart:
        return self.alpha_minus.chart

    def direction_field(self) -> VectorField:
        """A vector field spanning the intersection of the two kernels
        (cross of the coefficient triples; sign is a choice)."""
        am = self.alpha_minus.coeffs
        ap = self.alpha_plus.coeffs

        def comp(i):
            j, k = {0: (1, 2), 1: (2, 0), 2: (0, 1)}[i]
            def fn(a, b, c):
                return am[j](a, b, c) * ap[k](a, b, c) - am[k](a, b, c) * ap[j](a, b, c)
            return ScalarField(self.chart, fn)

        return VectorField(self.chart, tuple(comp(i) for i in range(3)), "ker^ker")

    def validate(self, grid: GridSpec) -> list[VerificationReport]:
        """Both strict sign conditions plus kernel transversality."""
        return [
            verify_contact(self.alpha_minus, -1, grid),
            verify_contact(self.alpha_plus, +1, grid),
            transversality_report(self.alpha_minus, self.alpha_plus, grid),
        ]


def classify_vector(Y: VectorField, bi: BiContact, point,
                    tol: float = ON_KERNEL_TOL,
                    flip_orientation: bool = False) -> Quadrant:
    """Classify Y(point) against the two kernel planes.

    Pairings smaller than tol * |Y| * |form| count as lying on the plane.
    """
    p = tuple(float(x) for x in point)
    yv = Y.at(p)
    ny = np.linalg.norm(yv)
    if ny < DEGENERATE_TOL:
        raise ValidationError("cannot classify the zero vector", point=p)
    am = np.array([c.at(p) for c in bi.alpha_minus.coeffs])
    ap = np.array([c.at(p) for c in bi.alpha_plus.coeffs])
    vm = float(am @ yv)
    vp = float(ap @ yv)
    if flip_orientation:
        vp = -vp
    on_minus = abs(vm) <= tol * ny * np.linalg.norm(am)
    on_plus = abs(vp) <= tol * ny * np.linalg.norm(ap)
    if on_minus and on_plus:
        return Quadrant.ALONG_X
    if on_minus:
        return Quadrant.ON_XI_MINUS
    if on_plus:
        return Quadrant.ON_XI_PLUS
    if vm > 0:
        return Quadrant.I if vp > 0 else Quadrant.IV
    return Quadrant.II if vp > 0 else Quadrant.III


def hozoori_certificate(bi: BiContact, X: VectorField, grid: GridSpec,
                        special_region=None,
                        tol: float = ON_KERNEL_TOL) -> VerificationReport:
    """Sufficient positivity certificate for the flow directed by ``bi``.

    Passes when the Reeb field of the negative form classifies as quadrant
    I or III at every grid sample, with the on-kernel case (Reeb field
    inside the positive kernel plane) accepted inside ``special_region``.
    ``special_region`` is a predicate of grid point arrays; None accepts
    the on-kernel case everywhere.  A fail is never a disproof.

    ``X`` is checked to actually be directed by the pair (both pairings
    vanish relative to its magnitude) before classification begins.
    """
    t0 = time.perf_counter()
    chart = bi.chart
    pts = grid.points(chart)
    ones = 1.0 + 0.0 * np.asarray(pts[0])

    xc = np.stack([np.asarray(c(*pts), dtype=float) * ones for c in X.components])
    am = np.stack([np.asarray(c(*pts), dtype=float) * ones for c in bi.alpha_minus.coeffs])
    ap = np.stack([np.asarray(c(*pts), dtype=float) * ones for c in bi.alpha_plus.coeffs])
    nx = np.linalg.norm(xc, axis=0)
    res_m = np.abs(np.sum(am * xc, axis=0)) / (nx * np.linalg.norm(am, axis=0))
    res_p = np.abs(np.sum(ap * xc, axis=0)) / (nx * np.linalg.norm(ap, axis=0))
    worst = max(float(res_m.max()), float(res_p.max()))
    if worst > tol:
        raise ValidationError(
            f"X is not directed by the pair: kernel residual {worst:.3e}")

    R = reeb_field(bi.alpha_minus)
    rc = np.stack([np.asarray(c(*pts), dtype=float) * ones for c in R.components])
    nr = np.linalg.norm(rc, axis=0)
    # Normalized pairings, scale-invariant in both the vector and the forms.
    um = np.sum(am * rc, axis=0) / (nr * np.linalg.norm(am, axis=0))
    up = np.sum(ap * rc, axis=0) / (nr * np.linalg.norm(ap, axis=0))
    ok_quadrant = ((um > 0) & (up > 0)) | ((um < 0) & (up < 0))
    on_plus = np.abs(up) <= tol
    if special_region is None:
        allowed_on_plus = on_plus
    else:
        allowed_on_plus = on_plus & np.asarray(special_region(*pts), dtype=bool)
    ok = ok_quadrant | allowed_on_plus

    severity = np.minimum(np.abs(um), np.abs(up))
    counts = {
        "quadrant_I_or_III": int(np.count_nonzero(ok_quadrant)),
        "on_xi_plus": int(np.count_nonzero(on_plus & ~ok_quadrant)),
        "violations": int(np.count_nonzero(~ok)),
    }
    t1 = time.perf_counter()
    if np.all(ok):
        margin = np.where(ok_quadrant, severity, tol - np.abs(up))
        return VerificationReport(
            "hozoori_positivity(R[alpha_minus])", "min>", float(np.min(margin)),
            0.0, None, True, int(ok.size), t1 - t0, counts)
    bad = np.where(~ok, severity, -np.inf)
    idx = int(np.argmax(bad))
    argmin = tuple(float(p[idx]) for p in pts)
    return VerificationReport(
        "hozoori_positivity(R[alpha_minus])", "min>", -float(severity[idx]),
        0.0, argmin, False, int(ok.size), t1 - t0, counts)


def s_average_isotopy(alpha_plus: OneForm, steps: int, grid: GridSpec,
                      s_samples: int = 64):
    """Straighten the s-dependence of a flow-box positive form.

    For alpha_plus = ds - b(s,v,w) dv, linearly interpolates b towards its
    s-average.  Every interpolant is grid-verified (positive contact, and
    the w-direction Reeb field of the negative form stays in its kernel);
    the sequence is truncated at the first failure.

    Returns (forms, reports); len(forms) == steps + 1 on full success.
    """
    chart = alpha_plus.chart
    b = -alpha_plus.coeffs[1]
    ds_coeff = alpha_plus.coeffs[0]
    w_coeff = alpha_plus.coeffs[2]

    s_axis = chart.axis_samples(0, s_samples)

    def b_bar_fn(a, bb, cc):
        acc = 0.0
        for sk in s_axis:
            acc = acc + b.fn(sk + 0.0 * a, bb, cc)
        return acc / len(s_axis)

    b_bar = ScalarField(chart, b_bar_fn, "s_avg(b)")

    forms: list[OneForm] = []
    reports: list[VerificationReport] = []
    for k in range(steps + 1):
        t = k / steps
        bt = b * (1.0 - t) + b_bar * t
        form = OneForm(chart, (ds_coeff, -bt, w_coeff), f"isotopy[{t:.3f}]")
        rep = verify_contact(form, +1, grid, name=f"isotopy step {k}: contact>0")
        kernel_res = residual_report(
            f"isotopy step {k}: dw-Reeb in kernel",
            np.asarray(form.coeffs[2](*grid.points(chart)), dtype=float)
            + 0.0 * np.asarray(grid.points(chart)[0]),
            grid.zero_tol, None)
        reports.extend([rep, kernel_res])
        forms.append(form)
        if not (rep.passed and kernel_res.passed):
            break
    return forms, reports
