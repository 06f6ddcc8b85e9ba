"""Embedding of the secant-profile universe as a hyperboloid in R^5.

In the u-chart the map

    z0 = A sinh(u0)
    zi = A cosh(u0) 2 u^i / (|u|^2 + 1)            (i = 1, 2, 3)
    z4 = A cosh(u0) (|u|^2 - 1) / (|u|^2 + 1)

lands on ``-(z0)^2 + (z1)^2 + ... + (z4)^2 = A^2`` and pulls the ambient
metric ``diag(+1, -1, -1, -1, -1)`` back to the u-chart metric with a = A,
a space of constant sectional curvature K = -1/A^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .curvature import constant_curvature_form, lowered_riemann, riemann_numeric
from .errors import ChartProfileMismatch, ConfigError
from .finite_diff import jacobian
from .geometry import Chart, ChartPoint, MetricAtPoint, metric_at
from .scale_factor import secant

AMBIENT_METRIC = np.diag([1.0, -1.0, -1.0, -1.0, -1.0])
DEFAULT_STEP = 1e-3


@dataclass(frozen=True)
class AmbientPoint:
    z: tuple[float, float, float, float, float]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.z)


def _check(u: ChartPoint, A: float) -> None:
    if u.chart is not Chart.MODIFIED_U:
        raise ChartProfileMismatch("the embedding is defined on the u-chart")
    if not A > 0:
        raise ConfigError(f"embedding radius A must be positive, got {A}")


def embed_batch(U, A: float) -> np.ndarray:
    """Ambient coordinates (..., 5) of u-chart coordinates (..., 4)."""
    U = np.asarray(U, dtype=float)
    s2 = U[..., 1] ** 2 + U[..., 2] ** 2 + U[..., 3] ** 2
    d = s2 + 1.0
    ch = A * np.cosh(U[..., 0])
    return np.stack([A * np.sinh(U[..., 0]),
                     ch * 2 * U[..., 1] / d, ch * 2 * U[..., 2] / d, ch * 2 * U[..., 3] / d,
                     ch * (s2 - 1.0) / d], axis=-1)


def embed(u: ChartPoint, A: float) -> AmbientPoint:
    _check(u, A)
    return AmbientPoint(tuple(embed_batch(u.array, A).tolist()))


def hyperboloid_residual(z: AmbientPoint, A: float) -> float:
    """Relative deviation of ``-(z0)^2 + sum (zi)^2`` from ``A^2``."""
    v = z.array
    return abs(-v[0] ** 2 + np.sum(v[1:] ** 2) - A * A) / (A * A)


def sphere_radius_residual(z: AmbientPoint, A: float, u0: float) -> float:
    """Relative deviation of |(z1..z4)| from the slice radius ``A cosh(u0)``."""
    r = A * np.cosh(u0)
    return abs(np.linalg.norm(z.array[1:]) - r) / r


def induced_metric(u: ChartPoint, A: float, h: float = DEFAULT_STEP) -> MetricAtPoint:
    """Pull-back ``J^T diag(1,-1,-1,-1,-1) J`` with a finite-difference Jacobian."""
    _check(u, A)
    J = jacobian(lambda X: embed_batch(X, A), u.array, h)
    g = J.T @ AMBIENT_METRIC @ J
    return MetricAtPoint(g=g, g_inv=np.linalg.inv(g))


def metric_deviation(u: ChartPoint, A: float, h: float = DEFAULT_STEP) -> float:
    """Largest relative difference between the pull-back and the u-chart metric with a = A."""
    ref = metric_at(secant(A), u).g
    got = induced_metric(u, A, h).g
    return float(np.max(np.abs(got - ref)) / np.max(np.abs(ref)))


@dataclass(frozen=True)
class SectionalCurvatureResult:
    max_deviation: float
    K_estimate: float
    K_expected: float


def sectional_curvature_check(a: float, samples: Sequence[ChartPoint]) -> SectionalCurvatureResult:
    """Compare the numerically lowered Riemann tensor with the constant-curvature form.

    ``R_pqij`` comes from the finite-difference route on the u-chart metric;
    the deviation is ``max |R_pqij - K (g_pi g_qj - g_pj g_qi)|`` with
    K = -1/a^2, and ``K_estimate`` is the least-squares fit of K.
    """
    profile = secant(a)
    K = -1.0 / (a * a)
    worst = 0.0
    num = den = 0.0
    for p in samples:
        if p.chart is not Chart.MODIFIED_U:
            raise ChartProfileMismatch("sectional curvature samples must be u-chart points")
        g = metric_at(profile, p).g
        R = lowered_riemann(riemann_numeric(profile, p).riemann, g)
        T = constant_curvature_form(g)
        worst = max(worst, float(np.max(np.abs(R - K * T))))
        num += float(np.sum(R * T))
        den += float(np.sum(T * T))
    return SectionalCurvatureResult(max_deviation=worst, K_estimate=num / den, K_expected=K)
