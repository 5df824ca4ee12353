"""Verification records produced by grid checks."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    """Outcome of one checked inequality or identity over a grid.

    ``value`` is the decisive extremum (grid minimum for ``min>`` checks,
    maximum magnitude for residual checks) and ``argmin`` the sample point
    where it was attained.  ``passed`` is derived from ``value`` against
    ``threshold`` by the stated comparison, never set independently.
    """

    check: str
    comparison: str          # "min>", "max<", "residual<="
    value: float
    threshold: float
    argmin: tuple | None
    passed: bool
    samples: int
    wall_time: float = 0.0
    details: dict = field(default_factory=dict)

    def to_dict(self, include_timing: bool = False) -> dict:
        """Serializable record; timing is excluded by default so identical
        configurations produce byte-identical reports."""
        out = {
            "check": self.check,
            "comparison": self.comparison,
            "value": self.value,
            "tolerance": self.threshold,
            "argmin": list(self.argmin) if self.argmin is not None else None,
            "verdict": "pass" if self.passed else "fail",
            "samples": self.samples,
        }
        if self.details:
            out["details"] = self.details
        if include_timing:
            out["wall_time"] = self.wall_time
        return out

    def __str__(self):
        verdict = "PASS" if self.passed else "FAIL"
        at = f" at {tuple(round(x, 6) for x in self.argmin)}" if self.argmin else ""
        return (f"[{verdict}] {self.check}: {self.comparison} "
                f"value={self.value:.6g} threshold={self.threshold:.3g}{at}")


def min_report(check: str, values, threshold: float, points, wall_time: float = 0.0,
               details: dict | None = None) -> VerificationReport:
    """Build a ``min>`` report from grid samples."""
    import numpy as np
    values = np.asarray(values)
    idx = int(np.argmin(values))
    argmin = tuple(float(p[idx]) for p in points) if points is not None else None
    value = float(values[idx])
    return VerificationReport(check, "min>", value, threshold, argmin,
                              value > threshold, int(values.size), wall_time,
                              details or {})


def residual_report(check: str, values, tol: float, points, wall_time: float = 0.0,
                    details: dict | None = None) -> VerificationReport:
    """Build a ``residual<=`` report from absolute residual samples."""
    import numpy as np
    values = np.abs(np.asarray(values))
    idx = int(np.argmax(values))
    argmax = tuple(float(p[idx]) for p in points) if points is not None else None
    value = float(values[idx])
    return VerificationReport(check, "residual<=", value, tol, argmax,
                              value <= tol, int(values.size), wall_time,
                              details or {})
