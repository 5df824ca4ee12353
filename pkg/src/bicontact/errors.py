"""Exception types shared across the library."""

from __future__ import annotations


class BicontactError(Exception):
    """Base class for all library errors."""


class ExpressionError(BicontactError):
    """Syntax or name error in a coefficient expression.

    Carries the 0-based character offset of the offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (offset {position})")
        self.position = position


class DomainError(BicontactError):
    """A function was evaluated outside its domain (e.g. tan at a pole)."""


class DerivativeDepthError(BicontactError):
    """A built-in profile was differentiated beyond its stored order."""


class DegeneratePointError(BicontactError):
    """Contact coefficient fell below tolerance where a Reeb field was needed."""

    def __init__(self, message: str, point=None, value=None):
        super().__init__(message)
        self.point = point
        self.value = value


class ChartExitError(BicontactError):
    """An integrated path left the chart box."""

    def __init__(self, face: str, time: float, point):
        super().__init__(f"path exits chart through {face} at t={time:.6g}")
        self.face = face
        self.time = time
        self.point = point


class OrbitClosureError(BicontactError):
    """A curve expected to close up failed to do so within tolerance."""


class SingularFoliationError(BicontactError):
    """The characteristic line field degenerated on a boundary face."""


class SeamError(BicontactError):
    """Glued forms failed the pullback identity on the cut annulus.

    This identity is exact, so any residual above tolerance signals an
    implementation bug rather than an inadmissible parameter choice.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class ValidationError(BicontactError):
    """A model invariant failed; carries the offending sample point."""

    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = point


class ConfigError(BicontactError):
    """Invalid run configuration; carries the full list of problems."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n" + "\n".join(self.problems))
