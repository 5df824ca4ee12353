"""Classical one-step integration of vector fields on a chart.

Coordinates are integrated unwrapped; periodic winding is recovered from the
net displacement.  Default step count keeps desk-scale orbits cheap while the
optional Richardson pass estimates the endpoint error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charts import Chart
from .errors import ChartExitError, OrbitClosureError
from .fields import VectorField

DEFAULT_STEPS = 4096


@dataclass
class SampledPath:
    chart: Chart
    times: np.ndarray
    points: np.ndarray  # shape (n, 3), unwrapped coordinates
    richardson_error: float | None = None

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    def end_wrapped(self) -> np.ndarray:
        return self.chart.wrap(self.end)

    def net_winding(self, coord: str) -> float:
        """Net displacement along a periodic coordinate in units of its period."""
        i = self.chart.index(coord)
        if not self.chart.periodic[i]:
            raise ValueError(f"{coord} is not periodic")
        return float((self.points[-1][i] - self.points[0][i]) / self.chart.period(i))

    def windings(self) -> dict[str, float]:
        return {name: self.net_winding(name)
                for i, name in enumerate(self.chart.coord_names)
                if self.chart.periodic[i]}


def _eval(Y: VectorField, p):
    v = np.array([float(c.fn(p[0], p[1], p[2])) for c in Y.components])
    if not np.all(np.isfinite(v)):
        raise ChartExitError("non-finite field value", 0.0, p)
    return v


def _rk4_step(Y: VectorField, p, h):
    k1 = _eval(Y, p)
    k2 = _eval(Y, p + 0.5 * h * k1)
    k3 = _eval(Y, p + 0.5 * h * k2)
    k4 = _eval(Y, p + h * k3)
    return p + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate_flow(Y: VectorField, p0, T: float, steps: int = DEFAULT_STEPS,
                   richardson: bool = False) -> SampledPath:
    """Integrate Y from p0 for time T with a fixed-step 4th order scheme.

    Raises ChartExitError (with the exit face and approximate exit time) if
    the path leaves the box through a non-periodic face, and reports
    non-finite field values the same way.
    """
    if steps <= 0:
        raise ValueError("steps must be positive")
    chart = Y.chart
    h = T / steps
    pts = np.empty((steps + 1, 3))
    pts[0] = np.asarray(p0, dtype=float)
    p = pts[0].copy()
    for n in range(steps):
        p_new = _rk4_step(Y, p, h)
        face = chart.exit_face(p_new)
        if face is not None:
            raise ChartExitError(face, (n + 0.5) * h, p_new)
        pts[n + 1] = p_new
        p = p_new
    times = np.linspace(0.0, T, steps + 1)
    err = None
    if richardson:
        half = integrate_flow(Y, p0, T, steps=2 * steps, richardson=False)
        err = float(np.linalg.norm(half.end - pts[-1]))
    return SampledPath(chart, times, pts, err)


def _jacobian(Y: VectorField, p) -> np.ndarray:
    from . import autodiff as ad
    J = np.empty((3, 3))
    for j in range(3):
        args = ad.seed((p[0], p[1], p[2]), j)
        for i in range(3):
            r = Y.components[i].fn(*args)
            J[i, j] = r.eps if isinstance(r, ad.Dual) else 0.0
    return J


def variational_monodromy(Y: VectorField, p0, period: float,
                          steps: int = DEFAULT_STEPS,
                          closure_tol: float = 1e-6) -> np.ndarray:
    """Period map of the linearized flow along a closed orbit.

    Integrates the orbit together with the 3x3 variational system; the
    orbit must return to p0 (periodic coordinates modulo their period)
    within closure_tol, otherwise OrbitClosureError is raised.  The
    determinant of the result equals exp of the integrated divergence, so
    it is 1 up to integration error for volume-preserving fields.
    """
    chart = Y.chart
    h = period / steps
    p = np.asarray(p0, dtype=float).copy()
    M = np.eye(3)

    def rhs(state):
        pt, mat = state
        return _eval(Y, pt), _jacobian(Y, pt) @ mat

    for _ in range(steps):
        k1p, k1m = rhs((p, M))
        k2p, k2m = rhs((p + 0.5 * h * k1p, M + 0.5 * h * k1m))
        k3p, k3m = rhs((p + 0.5 * h * k2p, M + 0.5 * h * k2m))
        k4p, k4m = rhs((p + h * k3p, M + h * k3m))
        p = p + (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
        M = M + (h / 6.0) * (k1m + 2 * k2m + 2 * k3m + k4m)

    gap = p - np.asarray(p0, dtype=float)
    for i in range(3):
        if chart.periodic[i]:
            per = chart.period(i)
            gap[i] = gap[i] - per * np.round(gap[i] / per)
    if np.linalg.norm(gap) > closure_tol:
        raise OrbitClosureError(
            f"orbit failed to close: endpoint gap {np.linalg.norm(gap):.3e} "
            f"exceeds {closure_tol:.1e}")
    return M
