"""Coordinate boxes with periodic identifications and a fixed volume ordering."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi


def _perm_sign(base, perm):
    """Sign of the permutation taking ``base`` to ``perm``."""
    idx = [base.index(p) for p in perm]
    sign = 1
    for i in range(3):
        for j in range(i + 1, 3):
            if idx[i] > idx[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class Chart:
    """A 3D coordinate box.

    ``coord_names`` fixes the coordinate order used for component triples
    everywhere in the library.  ``volume_order`` is the permutation of the
    coordinates whose wedge is declared the positive volume form; signed
    3-form coefficients are always reported against it.
    """

    coord_names: tuple[str, str, str]
    ranges: tuple[tuple[float, float], tuple[float, float], tuple[float, float]]
    periodic: tuple[bool, bool, bool] = (False, False, False)
    volume_order: tuple[str, str, str] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.volume_order is None:
            object.__setattr__(self, "volume_order", self.coord_names)
        if sorted(self.volume_order) != sorted(self.coord_names):
            raise ValueError("volume_order must be a permutation of coord_names")
        if len(set(self.coord_names)) != 3:
            raise ValueError("coordinate names must be distinct")
        for i in range(3):
            lo, hi = self.ranges[i]
            if hi <= lo:
                raise ValueError(f"empty range for {self.coord_names[i]}")

    @property
    def volume_sign(self) -> int:
        """+1 if volume_order agrees with coord_names orientation, else -1."""
        return _perm_sign(self.coord_names, self.volume_order)

    def index(self, name: str) -> int:
        return self.coord_names.index(name)

    def period(self, i: int) -> float:
        lo, hi = self.ranges[i]
        return hi - lo

    def contains(self, point, slack: float = 0.0) -> bool:
        for i in range(3):
            if self.periodic[i]:
                continue
            lo, hi = self.ranges[i]
            if not (lo - slack <= point[i] <= hi + slack):
                return False
        return True

    def exit_face(self, point) -> str | None:
        """Name of the first violated non-periodic face, or None."""
        for i in range(3):
            if self.periodic[i]:
                continue
            lo, hi = self.ranges[i]
            if point[i] < lo:
                return f"{self.coord_names[i]}={lo:g}"
            if point[i] > hi:
                return f"{self.coord_names[i]}={hi:g}"
        return None

    def wrap(self, point):
        """Wrap periodic coordinates into their fundamental range."""
        out = np.array(point, dtype=float)
        for i in range(3):
            if self.periodic[i]:
                lo, _ = self.ranges[i]
                out[i] = lo + np.mod(out[i] - lo, self.period(i))
        return out

    def axis_samples(self, i: int, n: int) -> np.ndarray:
        """n samples along axis i: wrapped-endpoint for periodic axes,
        inclusive endpoints otherwise (so stride-k subsets of a refined
        grid are again grids)."""
        lo, hi = self.ranges[i]
        if self.periodic[i]:
            return lo + (hi - lo) * np.arange(n) / n
        return np.linspace(lo, hi, n)


@dataclass(frozen=True)
class GridSpec:
    """Sampling resolution and tolerances for grid verification."""

    counts: tuple[int, int, int] = (32, 32, 32)
    zero_tol: float = 1e-9
    margin: float = 0.0

    def __post_init__(self):
        if any(c < 2 for c in self.counts):
            raise ValueError("grid needs at least 2 samples per axis")

    @classmethod
    def cube(cls, n: int, zero_tol: float = 1e-9, margin: float = 0.0) -> "GridSpec":
        return cls((n, n, n), zero_tol, margin)

    def points(self, chart: Chart):
        """Flattened meshgrid samples as three 1D arrays."""
        axes = [chart.axis_samples(i, self.counts[i]) for i in range(3)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return tuple(m.ravel() for m in mesh)

    def point_at(self, chart: Chart, flat_index: int):
        axes = [chart.axis_samples(i, self.counts[i]) for i in range(3)]
        i, j, k = np.unravel_index(flat_index, self.counts)
        return (float(axes[0][i]), float(axes[1][j]), float(axes[2][k]))


def flow_box_chart(delta: float, eps: float, name_s="s", name_v="v", name_w="w") -> Chart:
    """Surgery flow-box chart: s periodic, dV = ds^dv^dw."""
    return Chart(
        coord_names=(name_s, name_v, name_w),
        ranges=((0.0, TWO_PI), (-delta, delta), (-eps, eps)),
        periodic=(True, False, False),
        volume_order=(name_s, name_v, name_w),
    )


def transverse_box_chart(t_half: float, eps: float) -> Chart:
    """Chart around an annulus transverse to a Reeb flow: coordinates
    (t, s, w) with s periodic and dV = dt^dw^ds."""
    return Chart(
        coord_names=("t", "s", "w"),
        ranges=((-t_half, t_half), (0.0, TWO_PI), (-eps, eps)),
        periodic=(False, True, False),
        volume_order=("t", "w", "s"),
    )


def torus_chart() -> Chart:
    """The 3-torus: x, y with period 2*pi, z with period 1 (the natural
    period of the rotating-form family), dV = dx^dy^dz."""
    return Chart(
        coord_names=("x", "y", "z"),
        ranges=((0.0, TWO_PI), (0.0, TWO_PI), (0.0, 1.0)),
        periodic=(True, True, True),
        volume_order=("x", "y", "z"),
    )
