"""Dehn-type surgery on the tangent annulus of a flow box.

The cut runs along the w = 0 annulus of a flow-box model.  Points (s, v)
on the lower side are reglued to (s + f(v), v) on the upper side, where f
is a monotone shear dropping from 0 to -2 pi q across |v| < delta.  The
shear alone ruins both contact forms at the seam, so each side carries a
compensating deformation supported in a collar of width eps:

* the negative form gets  alpha_minus - d(h),  h = lam1(w) * M(v),  with
  M the shear moment integral; its contact coefficient becomes
  -1 + dh/dw, so admissibility is |dh/dw| < 1;
* the positive form gets  alpha_plus - lam2(w) f'(v) dv,  whose contact
  coefficient becomes db/dw + lam2'(w) f'(v): automatically at least the
  undeformed one when q > 0, and a genuine constraint when q < 0.

Deformation sides: "above" puts the full compensation on w >= 0, "below"
on w <= 0 (with amplitude -1), "split" halves it across both sides; the
seam identity fixes the amplitude difference to 1 in every mode.

All checks run on grids and are attached to the returned object; an
inadmissible parameter choice shows up as a failed report, never as an
exception.  Seam mismatches, by contrast, are hard errors: the pullback
identity is exact, so a residual means a bug.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import autodiff as ad
from .charts import TWO_PI, Chart, GridSpec, flow_box_chart
from .contact import BiContact, hozoori_certificate, verify_contact
from .errors import ChartExitError, SeamError, ValidationError
from .fields import ChartMap, OneForm, ScalarField, constant, coordinate
from .models import FlowBoxModel
from .profiles import CutoffProfile, ShearProfile, tangent_weighted_cutoff
from .reports import VerificationReport, min_report, residual_report

_SIDE_AMPLITUDES = {"above": (1.0, 0.0), "below": (0.0, -1.0), "split": (0.5, -0.5)}


def admissible_delta(q: int, eps: float, lambda_max: float | None = None) -> float:
    """Largest shear half-width with the a priori contact guarantee.

    The bound chain  |dh/dw| <= delta * lambda_max * 2 pi (|q|+1) < 1
    gives delta_max = 1 / (lambda_max * 2 pi (|q|+1)); with a near-optimal
    cutoff (lambda_max close to 1/eps) this is the classical
    eps / (2 pi (|q|+1)).  The bound is sufficient, not necessary: the
    grid check is the authority and typically admits several times more.
    """
    if lambda_max is None:
        lambda_max = 1.0 / eps
    return 1.0 / (lambda_max * TWO_PI * (abs(q) + 1.0))


@dataclass(frozen=True)
class SurgerySpec:
    q: int
    delta: float
    eps: float
    shear: ShearProfile
    cutoff1: CutoffProfile
    cutoff2: CutoffProfile
    side: str = "above"

    def __post_init__(self):
        if self.side not in _SIDE_AMPLITUDES:
            raise ValueError(f"side must be one of {sorted(_SIDE_AMPLITUDES)}")
        if not math.isclose(self.shear.half, self.delta):
            raise ValueError("shear half-width must match spec delta")
        if self.shear.q != self.q:
            raise ValueError("shear twist count must match spec q")

    @classmethod
    def standard(cls, q: int, delta: float, eps: float, rho: float = 0.1,
                 side: str = "above") -> "SurgerySpec":
        return cls(q, delta, eps, ShearProfile.tangent(q, delta),
                   CutoffProfile.ramp(eps, rho), CutoffProfile.ramp(eps, rho), side)

    def with_cutoff2(self, cutoff2: CutoffProfile) -> "SurgerySpec":
        return SurgerySpec(self.q, self.delta, self.eps, self.shear,
                           self.cutoff1, cutoff2, self.side)

    def to_dict(self) -> dict:
        return {"q": self.q, "delta": self.delta, "eps": self.eps,
                "side": self.side, "shear_sup_d1": self.shear.sup_d1,
                "cutoff1_sup_d1": self.cutoff1.sup_d1,
                "cutoff2_sup_d1": self.cutoff2.sup_d1,
                "cutoff2_kind": self.cutoff2.kind}


@dataclass
class GluedBiContact:
    """Two-sided glued chart with per-side deformed forms."""

    model: FlowBoxModel
    spec: SurgerySpec
    chart: Chart                       # shared coordinate box (both signs of w)
    transition: ChartMap               # F(s, v, w) = (s + f(v), v, w)
    plus: BiContact                    # deformed forms valid on w >= 0
    minus: BiContact                   # deformed forms valid on w <= 0
    original: BiContact
    reports: dict = field(default_factory=dict)

    def passed_contact(self) -> bool:
        keys = ("alpha_minus_plus_side", "alpha_minus_minus_side",
                "alpha_plus_plus_side", "alpha_plus_minus_side")
        return all(self.reports[k].passed for k in keys)

    def side(self, w_sign: int) -> BiContact:
        return self.plus if w_sign >= 0 else self.minus

    def to_bundle(self) -> dict:
        return {
            "parameters": self.spec.to_dict(),
            "model": {"delta": self.model.delta, "eps": self.model.eps,
                      "b": self.model.b.name},
            "profiles": {"shear": self.spec.shear.samples(),
                         "cutoff1": self.spec.cutoff1.samples(),
                         "cutoff2": self.spec.cutoff2.samples()},
            "checks": [rep.to_dict() for rep in self.reports.values()],
        }


def _deformed_forms(model: FlowBoxModel, spec: SurgerySpec, w_sign: int):
    """Deformed (negative, positive) forms for one side of the cut."""
    chart = model.chart
    amp = _SIDE_AMPLITUDES[spec.side][0 if w_sign >= 0 else 1]
    shear, lam1, lam2 = spec.shear, spec.cutoff1, spec.cutoff2
    sgn = 1.0 if w_sign >= 0 else -1.0

    def warg(w):
        return sgn * w

    # alpha_minus - amp * d(lam1(w~) M(v)), w~ = +/- w per side
    def am_s(s, v, w):
        return v + 0.0 * ad.value_of(s)

    def am_v(s, v, w):
        return -amp * lam1.value(warg(w)) * v * shear.d1(v)

    def am_w(s, v, w):
        return 1.0 - amp * sgn * lam1.d1(warg(w)) * shear.moment(v)

    alpha_minus = OneForm(chart, (
        ScalarField(chart, am_s), ScalarField(chart, am_v), ScalarField(chart, am_w)),
        f"alpha_minus~[{'+' if w_sign >= 0 else '-'}]")

    # alpha_plus - amp * lam2(w~) f'(v) dv
    def ap_v(s, v, w):
        return -(model.b.fn(s, v, w) + amp * lam2.value(warg(w)) * shear.d1(v))

    alpha_plus = OneForm(chart, (
        constant(chart, 1.0), ScalarField(chart, ap_v), constant(chart, 0.0)),
        f"alpha_plus~[{'+' if w_sign >= 0 else '-'}]")

    return BiContact(alpha_minus, alpha_plus)


def _transition_map(model: FlowBoxModel, spec: SurgerySpec) -> ChartMap:
    shear = spec.shear

    def fn(s, v, w):
        return (s + shear.value(v), v + 0.0, w + 0.0)

    return ChartMap(model.chart, model.chart, fn, "F")


def lt_surgery(spec: SurgerySpec, model: FlowBoxModel,
               grid: GridSpec = GridSpec.cube(32)) -> GluedBiContact:
    """Cut along the tangent annulus, shear, deform, and verify.

    Contact checks run per side on half-boxes; failures are recorded in
    ``reports`` (expected for inadmissible parameters).  The seam identity
    is verified as well and raises SeamError on mismatch.
    """
    if spec.delta > model.delta:
        raise ValidationError("shear support exceeds the model annulus width")
    if spec.eps > model.eps:
        raise ValidationError("deformation collar exceeds the model box height")

    plus = _deformed_forms(model, spec, +1)
    minus = _deformed_forms(model, spec, -1)
    glued = GluedBiContact(model, spec, model.chart, _transition_map(model, spec),
                           plus, minus, model.bicontact)

    lo, hi = model.chart.ranges[2]
    upper = _restrict_chart(model.chart, (0.0, hi))
    lower = _restrict_chart(model.chart, (lo, 0.0))

    glued.reports["alpha_minus_plus_side"] = verify_contact(
        _rechart(plus.alpha_minus, upper), -1, grid, "alpha_minus~ contact (w>=0)")
    glued.reports["alpha_minus_minus_side"] = verify_contact(
        _rechart(minus.alpha_minus, lower), -1, grid, "alpha_minus~ contact (w<=0)")
    glued.reports["alpha_plus_plus_side"] = verify_contact(
        _rechart(plus.alpha_plus, upper), +1, grid, "alpha_plus~ contact (w>=0)")
    glued.reports["alpha_plus_minus_side"] = verify_contact(
        _rechart(minus.alpha_plus, lower), +1, grid, "alpha_plus~ contact (w<=0)")
    glued.reports["seam"] = verify_seam(glued, grid.zero_tol)
    return glued


def _restrict_chart(chart: Chart, w_range) -> Chart:
    return Chart(chart.coord_names,
                 (chart.ranges[0], chart.ranges[1], tuple(w_range)),
                 chart.periodic, chart.volume_order)


def _rechart(form: OneForm, chart: Chart) -> OneForm:
    return OneForm(chart, tuple(ScalarField(chart, c.fn, c.name) for c in form.coeffs),
                   form.name)


def verify_seam(glued: GluedBiContact, tol: float = 1e-9,
                n_s: int = 48, n_v: int = 48) -> VerificationReport:
    """Check F^*(deformed plus-side forms) = deformed minus-side forms on w = 0.

    The identity is exact, so any residual above tol raises SeamError.
    """
    t0 = time.perf_counter()
    chart = glued.chart
    F = glued.transition
    s = chart.axis_samples(0, n_s)
    v = np.linspace(-glued.model.delta, glued.model.delta, n_v)
    S, V = (m.ravel() for m in np.meshgrid(s, v, indexing="ij"))
    W = np.zeros_like(S)

    worst = 0.0
    argmax = None
    for plus_form, minus_form in ((glued.plus.alpha_minus, glued.minus.alpha_minus),
                                  (glued.plus.alpha_plus, glued.minus.alpha_plus)):
        from .fields import pullback_oneform
        pulled = pullback_oneform(F, plus_form)
        for i in range(3):
            lhs = np.asarray(pulled.coeffs[i](S, V, W), dtype=float) + 0.0 * S
            rhs = np.asarray(minus_form.coeffs[i](S, V, W), dtype=float) + 0.0 * S
            res = np.abs(lhs - rhs)
            idx = int(np.argmax(res))
            if res[idx] > worst:
                worst = float(res[idx])
                argmax = (float(S[idx]), float(V[idx]), 0.0)
    rep = VerificationReport("seam pullback identity", "residual<=", worst, tol,
                             argmax, worst <= tol, int(2 * 3 * S.size),
                             time.perf_counter() - t0)
    if not rep.passed:
        raise SeamError(f"seam residual {worst:.3e} exceeds {tol:.1e} "
                        f"(implementation bug)", worst)
    return rep


# ---------------------------------------------------------------------------
# negative twists


@dataclass(frozen=True)
class ExtensionResult:
    feasible: bool
    cutoff: CutoffProfile | None
    demand: float             # c * sup|f'|; feasible iff < 1
    deficit: float | None     # demand when infeasible
    report: VerificationReport | None

    def __bool__(self):
        return self.feasible


def negative_twist_extension(q: int, model: FlowBoxModel, delta: float,
                             eps: float,
                             grid: GridSpec = GridSpec.cube(32)) -> ExtensionResult:
    """Rotation-weighted compensation for a negative twist.

    Chooses lam2 with slope proportional to the plane rotation rate of the
    positive kernel (lam2'(w) = -c db/dw, c = 1/tan(eps) for the default
    b = tan w), the only weighting that can absorb a positive f' against
    the available rotation.  Feasible iff c * sup|f'| < 1, i.e.
    tan(eps) > sup|f'|; on success the deformed positive form passes its
    grid check, attached as ``report``.  Infeasibility is a value carrying
    the demand ratio, not an error.
    """
    if not (0.0 < eps < 0.5 * math.pi):
        raise ValidationError("collar height must stay below the rotation pole")
    shear = ShearProfile.tangent(q, delta)
    cutoff = tangent_weighted_cutoff(eps)
    # Only the positive part of f' fights the rotation; for q >= 0 the
    # shear is non-increasing and the extension is unconditional.
    demand = 0.0 if q >= 0 else shear.sup_d1 / math.tan(eps)
    if demand >= 1.0:
        return ExtensionResult(False, cutoff, demand, demand, None)
    spec = SurgerySpec(q, delta, eps, shear, CutoffProfile.ramp(eps), cutoff)
    plus = _deformed_forms(model, spec, +1)
    upper = _restrict_chart(model.chart, (0.0, model.chart.ranges[2][1]))
    rep = verify_contact(_rechart(plus.alpha_plus, upper), +1, grid,
                         f"alpha_plus~ contact (weighted, q={q})")
    return ExtensionResult(True, cutoff, demand, None, rep)


def admissible_range_from_slope(k: float, uncertainty: float = 0.0):
    """Smallest integer twist q with q > -k, floored conservatively.

    Returns None when k is infinite (every integer is admissible).
    """
    if k <= 0:
        raise ValidationError("slope must be positive")
    if math.isinf(k):
        return None
    k_low = k - abs(uncertainty)
    if k_low <= 0:
        raise ValidationError("slope uncertainty swallows the whole estimate")
    return math.floor(-k_low) + 1


# ---------------------------------------------------------------------------
# holonomy comparison


@dataclass(frozen=True)
class TwistResult:
    twist: int
    measured: float
    per_leaf: list
    fan_top: float
    steps: int

    def curves_csv_rows(self):
        """(curve_id, s, v, w, winding) rows for every sampled leaf."""
        rows = []
        for leaf in self.per_leaf:
            s0 = leaf["rows"][0][1]
            for cid, s, v, w in leaf["rows"]:
                rows.append((cid, s, v, w, int(math.floor((s - s0) / TWO_PI))))
        return rows


def _direction_slopes(bi: BiContact, s, v, w):
    """(ds/dv, dw/dv) of the kernel-intersection line, v-parametrized.

    The intersection of the two kernels is the cross of the coefficient
    triples; normalizing its v-component to -1 matches the flow direction
    of the underlying models (which cross the box from v = +delta to
    v = -delta).
    """
    am = [float(np.asarray(ad.value_of(c.fn(s, v, w)))) for c in bi.alpha_minus.coeffs]
    ap = [float(np.asarray(ad.value_of(c.fn(s, v, w)))) for c in bi.alpha_plus.coeffs]
    cross = np.cross(am, ap)
    if abs(cross[1]) < 1e-14:
        raise ChartExitError("flow direction stalls in v", 0.0, (s, v, w))
    return cross[0] / cross[1], cross[2] / cross[1]


def _integrate_leaf(glued_or_bi, s0: float, w0: float, delta: float,
                    steps: int, transition=None):
    """March the direction field from (s0, +delta, w0) to v = -delta.

    ``glued_or_bi`` may be a BiContact (single-sided, no seam) or a
    GluedBiContact, in which case the side is chosen by the sign of w and
    the shear transition is applied whenever the leaf crosses the seam.
    Returns the arrival (s, w) and sampled rows (s, v, w).
    """
    glued = glued_or_bi if isinstance(glued_or_bi, GluedBiContact) else None

    def bi_at(w):
        if glued is None:
            return glued_or_bi
        return glued.side(+1 if w >= 0.0 else -1)

    h = -2.0 * delta / steps
    s, w = float(s0), float(w0)
    v = delta
    rows = [(s, v, w)]
    for _ in range(steps):
        def rhs(vv, ss, ww):
            return _direction_slopes(bi_at(ww), ss, vv, ww)

        k1 = rhs(v, s, w)
        k2 = rhs(v + 0.5 * h, s + 0.5 * h * k1[0], w + 0.5 * h * k1[1])
        k3 = rhs(v + 0.5 * h, s + 0.5 * h * k2[0], w + 0.5 * h * k2[1])
        k4 = rhs(v + h, s + h * k3[0], w + h * k3[1])
        s_new = s + (h / 6.0) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        w_new = w + (h / 6.0) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        v_new = v + h
        if glued is not None and (w > 0.0) != (w_new > 0.0) and w != w_new:
            # Crossing the cut annulus: reglue with the shear.
            shift = float(np.asarray(glued.spec.shear.value(v_new)))
            s_new = s_new + (shift if w_new > 0.0 else -shift)
        s, w, v = s_new, w_new, v_new
        chart = (glued.chart if glued is not None else glued_or_bi.chart)
        lo, hi = chart.ranges[2]
        if not (lo <= w <= hi):
            raise ChartExitError(f"w={'%g' % (hi if w > hi else lo)}",
                                 float(delta - v), (s, v, w))
        rows.append((s, v, w))
    return s, w, rows


def goodman_twist_count(model: FlowBoxModel, spec: SurgerySpec,
                        glued: GluedBiContact, fan: int | None = None,
                        steps: int = 2048, w_top: float | None = None,
                        integer_tol: float = 0.05) -> TwistResult:
    """Integer twist of the outflow foliation induced by the surgery.

    A fan of inflow-wall heights w0 in [-w_top, w_top] is carried across
    the box by the original direction field and by the glued, deformed one
    (regluing with the shear whenever a leaf crosses the cut).  The
    difference of induced s-advances interpolates from the full shear
    displacement near the seam down to zero beyond the deformation collar;
    its net circle-continuous winding across the fan is the returned
    integer.  For a (1, q) shear the contract is -q.

    Arrival positions live on the s-circle, so adjacent-leaf differences
    are unwrapped modulo 2 pi; the fan is sized against |q| to keep true
    leaf-to-leaf variation under half a turn.  w_top must clear the
    deformation collar; leaves must also stay inside the box (the model
    flow conserves a height invariant, so leaves rise before they fall).
    A non-integer net winding raises ValidationError.
    """
    delta = spec.delta
    if w_top is None:
        w_top = min(spec.eps * 1.12, model.eps * 0.98)
    if w_top < spec.eps:
        raise ValidationError("fan top must clear the deformation collar")
    if fan is None:
        fan = max(12, 8 * abs(spec.q) + 4)
    if fan % 2:
        fan += 1  # even count keeps w0 = 0 (the cut itself) out of the fan

    heights = np.linspace(-w_top, w_top, fan)
    per_leaf = []
    shifts = []
    for idx, w0 in enumerate(heights):
        s_orig, w_orig, _ = _integrate_leaf(model.bicontact, 0.0, w0, delta, steps)
        s_new, w_new, rows = _integrate_leaf(glued, 0.0, w0, delta, steps)
        shift = s_new - s_orig
        shifts.append(shift)
        per_leaf.append({
            "w0": float(w0), "shift": float(shift),
            "w_return_original": float(w_orig), "w_return_glued": float(w_new),
            "rows": [(f"leaf{idx}",) + tuple(r) for r in rows],
        })

    diffs = np.diff(np.asarray(shifts))
    wrapped = (diffs + math.pi) % TWO_PI - math.pi
    measured = float(np.sum(wrapped) / TWO_PI)
    nearest = round(measured)
    if abs(measured - nearest) > integer_tol:
        raise ValidationError(
            f"relative winding {measured:.4f} is not an integer within "
            f"{integer_tol}; the fan does not clear the deformation "
            f"(try a different collar or fan top)")
    return TwistResult(int(nearest), float(measured), per_leaf, float(w_top), steps)
