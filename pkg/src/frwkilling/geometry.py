"""Stereographic charts on M = R x S^3 and the metric in each chart.

Three charts are used:

* ``north`` -- coordinates x0..x3, covering everything but the North Pole;
* ``south`` -- coordinates y0..y3, covering everything but the South Pole;
* ``u``     -- modified coordinates u0 = c t / a, u^i = x^i, available only for
  the secant profile, in which the metric becomes
  ``a^2 du0^2 - 4 a^2 cosh^2(u0) |du|^2 / (|u|^2 + 1)^2``.

All metric evaluators accept batches: coordinate arrays of shape (..., 4).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ChartProfileMismatch, ConfigError, SingularPointError
from .scale_factor import ProfileKind, ScaleFactorProfile, eval_R


class Chart(str, enum.Enum):
    NORTH = "north"
    SOUTH = "south"
    MODIFIED_U = "u"

    @classmethod
    def parse(cls, name: str) -> "Chart":
        key = name.strip().lower()
        aliases = {"north": cls.NORTH, "x": cls.NORTH, "n": cls.NORTH,
                   "south": cls.SOUTH, "y": cls.SOUTH, "s": cls.SOUTH,
                   "u": cls.MODIFIED_U, "modified": cls.MODIFIED_U, "modifiedu": cls.MODIFIED_U}
        try:
            return aliases[key]
        except KeyError:
            raise ConfigError(f"unknown chart {name!r}") from None

    @property
    def stereographic(self) -> bool:
        return self is not Chart.MODIFIED_U


@dataclass(frozen=True)
class ChartPoint:
    """An event of M given by four coordinates in a named chart."""

    chart: Chart
    coords: tuple[float, float, float, float]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if len(coords) != 4:
            raise ValueError("a chart point needs exactly 4 coordinates")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "chart", Chart(self.chart))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords)

    @property
    def time(self) -> float:
        return self.coords[0]

    @property
    def spatial_norm2(self) -> float:
        return self.coords[1] ** 2 + self.coords[2] ** 2 + self.coords[3] ** 2

    def moved(self, coords) -> "ChartPoint":
        return ChartPoint(self.chart, tuple(coords))


def north(*coords) -> ChartPoint:
    return ChartPoint(Chart.NORTH, coords)


def south(*coords) -> ChartPoint:
    return ChartPoint(Chart.SOUTH, coords)


def modified_u(*coords) -> ChartPoint:
    return ChartPoint(Chart.MODIFIED_U, coords)


def parse_point(text: str, chart: str | None = None) -> ChartPoint:
    """Parse ``x:0,0.5,0,0`` / ``u:0,0,0,0`` or bare ``0,0.5,0,0`` with ``chart``."""
    text = text.strip()
    if ":" in text:
        chart_name, _, text = text.partition(":")
    else:
        chart_name = chart or "north"
    try:
        coords = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad coordinates {text!r}") from exc
    if len(coords) != 4:
        raise ConfigError(f"expected 4 coordinates, got {len(coords)}")
    return ChartPoint(Chart.parse(chart_name), tuple(coords))


@dataclass(frozen=True)
class MetricAtPoint:
    g: np.ndarray
    g_inv: np.ndarray


def transition(p: ChartPoint) -> ChartPoint:
    """Map a point between the North and South stereographic charts.

    Time is unchanged; spatial coordinates are divided by their squared norm,
    so the map is an involution away from the chart origin.
    """
    if not p.chart.stereographic:
        raise ChartProfileMismatch("transition applies to the north/south charts only")
    n2 = p.spatial_norm2
    if n2 == 0.0:
        raise SingularPointError("the chart origin has no image in the other stereographic chart")
    x = p.array
    target = Chart.SOUTH if p.chart is Chart.NORTH else Chart.NORTH
    return ChartPoint(target, (x[0], x[1] / n2, x[2] / n2, x[3] / n2))


def well_conditioned(p: ChartPoint) -> ChartPoint:
    """Switch to the opposite stereographic chart when ``|x|^2 > 1``."""
    if p.chart.stereographic and p.spatial_norm2 > 1.0:
        return transition(p)
    return p


def require_secant(profile: ScaleFactorProfile) -> None:
    if profile.kind is not ProfileKind.SECANT:
        raise ChartProfileMismatch(
            f"the modified u-chart exists only for the secant profile, not {profile.kind.value}"
        )


def metric_diagonal(profile: ScaleFactorProfile, chart: Chart, X) -> np.ndarray:
    """Diagonal metric components at coordinates ``X`` of shape (..., 4)."""
    X = np.asarray(X, dtype=float)
    n2 = X[..., 1] ** 2 + X[..., 2] ** 2 + X[..., 3] ** 2
    if chart is Chart.MODIFIED_U:
        require_secant(profile)
        a2 = profile.a**2
        g00 = np.full_like(n2, a2)
        gs = -4.0 * a2 * np.cosh(X[..., 0]) ** 2 / (n2 + 1.0) ** 2
    else:
        r = eval_R(profile, X[..., 0])
        g00 = r * r
        gs = -4.0 * r * r / (n2 + 1.0) ** 2
    return np.stack([g00, gs, gs, gs], axis=-1)


def metric_matrix(profile: ScaleFactorProfile, chart: Chart, X) -> np.ndarray:
    """Full (..., 4, 4) metric matrices at a batch of coordinates."""
    d = metric_diagonal(profile, chart, X)
    out = np.zeros(d.shape + (4,))
    idx = np.arange(4)
    out[..., idx, idx] = d
    return out


def metric_at(profile: ScaleFactorProfile, p: ChartPoint) -> MetricAtPoint:
    """Metric and inverse metric at a point; the inverse is the reciprocal diagonal."""
    d = metric_diagonal(profile, p.chart, p.array)
    return MetricAtPoint(g=np.diag(d), g_inv=np.diag(1.0 / d))


# -- u-chart <-> north chart for the secant profile ------------------------

def x0_to_u0(x0):
    """u0 = c t / a = ln(sec x0 + tan x0); independent of a and c."""
    return np.arcsinh(np.tan(x0))


def u0_to_x0(u0):
    return np.arctan(np.sinh(u0))


def u_to_north(p: ChartPoint) -> ChartPoint:
    if p.chart is not Chart.MODIFIED_U:
        raise ChartProfileMismatch("expected a u-chart point")
    u = p.array
    return ChartPoint(Chart.NORTH, (float(u0_to_x0(u[0])), u[1], u[2], u[3]))


def north_to_u(p: ChartPoint) -> ChartPoint:
    if p.chart is not Chart.NORTH:
        raise ChartProfileMismatch("expected a north-chart point")
    x = p.array
    if abs(x[0]) >= 0.5 * np.pi:
        raise SingularPointError("|x0| must be < pi/2 to map into the u-chart")
    return ChartPoint(Chart.MODIFIED_U, (float(x0_to_u0(x[0])), x[1], x[2], x[3]))
