"""Connection, curvature and curvature-gradient engine.

Two independent routes are provided:

* closed forms, valid in the North/South stereographic charts, built from
  R and its derivatives;
* a numeric route that sees only the metric: Levi-Civita symbols from finite
  differences of g, Riemann from finite differences of those symbols, and
  the covariant derivative of Riemann from finite differences of that.

Index conventions: ``gamma[k, i, j]`` is Gamma^k_ij; ``riemann[p, q, i, j]``
is R^p_qij with

    R^p_qij = d_i Gamma^p_jq - d_j Gamma^p_iq + Gamma^p_ih Gamma^h_jq - Gamma^p_jh Gamma^h_iq,

``ricci[q, j] = R^p_qpj`` and ``nabla[s, p, q, i, j]`` is nabla_s R^p_qij.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np

from .errors import ChartProfileMismatch
from .finite_diff import check_step, gradient
from .geometry import Chart, ChartPoint, metric_diagonal, metric_matrix
from .scale_factor import ScaleFactorProfile, eval_R

DEFAULT_STEP_GAMMA = 1e-5
DEFAULT_STEP_RIEMANN = 4e-3
DEFAULT_STEP_NABLA = 4e-3
# nested differencing (three levels for nabla R) needs a high-order stencil
# so that a step large enough to contain roundoff keeps truncation small
STENCIL_ORDER = 6

_SPATIAL = (1, 2, 3)
_OFF_PAIRS = [(i, j) for i in _SPATIAL for j in _SPATIAL if i != j]


@dataclass(frozen=True)
class ConnectionAtPoint:
    gamma: np.ndarray

    def nonzero(self, atol: float = 0.0) -> list[tuple[tuple[int, int, int], float]]:
        idx = np.argwhere(np.abs(self.gamma) > atol)
        return [(tuple(int(v) for v in k), float(self.gamma[tuple(k)])) for k in idx]


@dataclass(frozen=True)
class CurvatureAtPoint:
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float


@dataclass(frozen=True)
class CurvatureGradientAtPoint:
    nabla_riemann: np.ndarray


# ---------------------------------------------------------------------------
# closed forms (stereographic charts)
# ---------------------------------------------------------------------------

def _require_stereographic(chart: Chart) -> None:
    if not chart.stereographic:
        raise ChartProfileMismatch("closed forms cover the north/south charts; use the numeric route")


def _profile_terms(profile: ScaleFactorProfile, X: np.ndarray):
    x0 = X[..., 0]
    r, r1, r2, r3 = (eval_R(profile, x0, n) for n in range(4))
    d = 1.0 + X[..., 1] ** 2 + X[..., 2] ** 2 + X[..., 3] ** 2
    return np.asarray(r), np.asarray(r1), np.asarray(r2), np.asarray(r3), d


def christoffel_closed_batch(profile: ScaleFactorProfile, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    r, r1, _, _, d = _profile_terms(profile, X)
    q = r1 / r
    out = np.zeros(X.shape[:-1] + (4, 4, 4))
    out[..., 0, 0, 0] = q
    for i in _SPATIAL:
        c_i = 2.0 * X[..., i] / d
        out[..., 0, i, i] = 4.0 * q / d**2
        out[..., i, 0, i] = q
        out[..., i, i, 0] = q
        out[..., i, i, i] = -c_i
    for k, i in _OFF_PAIRS:
        c_k = 2.0 * X[..., k] / d
        c_i = 2.0 * X[..., i] / d
        out[..., k, i, i] = c_k
        out[..., k, k, i] = -c_i
        out[..., k, i, k] = -c_i
    return out


def riemann_closed_batch(profile: ScaleFactorProfile, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    r, r1, r2, _, d = _profile_terms(profile, X)
    a = (r2 * r - r1 * r1) / (r * r)
    b = 4.0 * (r1 * r1 + r * r) / (r * r * d**2)
    out = np.zeros(X.shape[:-1] + (4, 4, 4, 4))
    for i in _SPATIAL:
        out[..., 0, i, 0, i] = 4.0 * a / d**2
        out[..., 0, i, i, 0] = -4.0 * a / d**2
        out[..., i, 0, 0, i] = a
        out[..., i, 0, i, 0] = -a
    for i, j in _OFF_PAIRS:
        out[..., i, j, i, j] = b
        out[..., i, j, j, i] = -b
    return out


def ricci_closed_batch(profile: ScaleFactorProfile, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    r, r1, r2, _, d = _profile_terms(profile, X)
    out = np.zeros(X.shape[:-1] + (4, 4))
    out[..., 0, 0] = (3.0 * r1 * r1 - 3.0 * r * r2) / (r * r)
    spatial = (8.0 * r * r + 4.0 * r1 * r1 + 4.0 * r * r2) / (r * r * d**2)
    for i in _SPATIAL:
        out[..., i, i] = spatial
    return out


def scalar_closed_batch(profile: ScaleFactorProfile, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    r, _, r2, _, _ = _profile_terms(profile, X)
    return -6.0 / r**2 - 6.0 * r2 / r**3


def nabla_riemann_closed_batch(profile: ScaleFactorProfile, X) -> np.ndarray:
    """The seven tabulated families of nonzero nabla_s R^p_qij."""
    X = np.asarray(X, dtype=float)
    r, r1, r2, r3, d = _profile_terms(profile, X)
    f = (4.0 * r1**3 - 5.0 * r2 * r1 * r + r3 * r * r) / r**3
    g = r1 * (2.0 * r1 * r1 - r2 * r + r * r) / r**3
    out = np.zeros(X.shape[:-1] + (4, 4, 4, 4, 4))
    for i in _SPATIAL:
        out[..., 0, 0, i, 0, i] = 4.0 * f / d**2
        out[..., 0, 0, i, i, 0] = -4.0 * f / d**2
        out[..., 0, i, 0, 0, i] = f
        out[..., 0, i, 0, i, 0] = -f
    for s, q in _OFF_PAIRS:
        out[..., 0, s, q, s, q] = -8.0 * g / d**2
        out[..., 0, s, q, q, s] = 8.0 * g / d**2
        out[..., s, 0, q, s, q] = 16.0 * g / d**4
        out[..., s, 0, q, q, s] = -16.0 * g / d**4
        out[..., s, q, 0, s, q] = 4.0 * g / d**2
        out[..., s, q, 0, q, s] = -4.0 * g / d**2
        out[..., s, s, q, q, 0] = 4.0 * g / d**2
        out[..., s, s, q, 0, q] = -4.0 * g / d**2
        out[..., s, q, s, 0, q] = 4.0 * g / d**2
        out[..., s, q, s, q, 0] = -4.0 * g / d**2
    return out


def christoffel_closed(profile: ScaleFactorProfile, p: ChartPoint) -> ConnectionAtPoint:
    _require_stereographic(p.chart)
    return ConnectionAtPoint(christoffel_closed_batch(profile, p.array))


def riemann_closed(profile: ScaleFactorProfile, p: ChartPoint) -> CurvatureAtPoint:
    _require_stereographic(p.chart)
    x = p.array
    return CurvatureAtPoint(
        riemann=riemann_closed_batch(profile, x),
        ricci=ricci_closed_batch(profile, x),
        scalar=float(scalar_closed_batch(profile, x)),
    )


def nabla_riemann_closed(profile: ScaleFactorProfile, p: ChartPoint) -> CurvatureGradientAtPoint:
    _require_stereographic(p.chart)
    return CurvatureGradientAtPoint(nabla_riemann_closed_batch(profile, p.array))


# ---------------------------------------------------------------------------
# numeric route: metric only
# ---------------------------------------------------------------------------

def _metric_fn(profile: ScaleFactorProfile, chart: Chart):
    return partial(metric_matrix, profile, chart)


def christoffel_numeric_batch(profile: ScaleFactorProfile, chart: Chart, X, h: float = DEFAULT_STEP_GAMMA):
    check_step(h)
    metric = _metric_fn(profile, chart)
    X = np.asarray(X, dtype=float)
    g = metric(X)
    dg = gradient(metric, X, h, STENCIL_ORDER)  # (..., s, a, b) = d_s g_ab
    g_inv = np.linalg.inv(g)
    # bracket[s, i, j] = d_j g_is + d_i g_sj - d_s g_ij
    bracket = (np.einsum("...jis->...sij", dg)
               + np.einsum("...isj->...sij", dg)
               - dg)
    return 0.5 * np.einsum("...ks,...sij->...kij", g_inv, bracket)


def _riemann_from(gamma: np.ndarray, dgamma: np.ndarray) -> np.ndarray:
    # dgamma[..., d, k, i, j] = d_d Gamma^k_ij
    term = np.einsum("...ipjq->...pqij", dgamma)
    quad = np.einsum("...pih,...hjq->...pqij", gamma, gamma)
    return term - np.swapaxes(term, -1, -2) + quad - np.swapaxes(quad, -1, -2)


def riemann_numeric_batch(profile: ScaleFactorProfile, chart: Chart, X, h: float = DEFAULT_STEP_RIEMANN):
    check_step(h)
    X = np.asarray(X, dtype=float)
    gamma_fn = partial(christoffel_numeric_batch, profile, chart, h=h)
    return _riemann_from(gamma_fn(X), gradient(gamma_fn, X, h, STENCIL_ORDER))


def covariant_derivative_riemann(gamma: np.ndarray, riemann: np.ndarray, d_riemann: np.ndarray) -> np.ndarray:
    """nabla_s R^p_qij from partial derivatives ``d_riemann[..., s, p, q, i, j]``."""
    return (d_riemann
            + np.einsum("...psh,...hqij->...spqij", gamma, riemann)
            - np.einsum("...hsq,...phij->...spqij", gamma, riemann)
            - np.einsum("...hsi,...pqhj->...spqij", gamma, riemann)
            - np.einsum("...hsj,...pqih->...spqij", gamma, riemann))


def nabla_riemann_numeric_batch(profile: ScaleFactorProfile, chart: Chart, X, h: float = DEFAULT_STEP_NABLA):
    check_step(h)
    X = np.asarray(X, dtype=float)
    riem_fn = partial(riemann_numeric_batch, profile, chart, h=h)
    gamma = christoffel_numeric_batch(profile, chart, X, h)
    return covariant_derivative_riemann(gamma, riem_fn(X), gradient(riem_fn, X, h, STENCIL_ORDER))


def ricci_from_riemann(riemann: np.ndarray) -> np.ndarray:
    return np.einsum("...pqpj->...qj", riemann)


def christoffel_numeric(profile: ScaleFactorProfile, p: ChartPoint, h: float = DEFAULT_STEP_GAMMA) -> ConnectionAtPoint:
    return ConnectionAtPoint(christoffel_numeric_batch(profile, p.chart, p.array, h))


def riemann_numeric(profile: ScaleFactorProfile, p: ChartPoint, h: float = DEFAULT_STEP_RIEMANN) -> CurvatureAtPoint:
    riem = riemann_numeric_batch(profile, p.chart, p.array, h)
    ric = ricci_from_riemann(riem)
    g_inv = np.linalg.inv(metric_matrix(profile, p.chart, p.array))
    return CurvatureAtPoint(riemann=riem, ricci=ric, scalar=float(np.einsum("qj,qj->", g_inv, ric)))


def nabla_riemann_numeric(profile: ScaleFactorProfile, p: ChartPoint, h: float = DEFAULT_STEP_NABLA) -> CurvatureGradientAtPoint:
    return CurvatureGradientAtPoint(nabla_riemann_numeric_batch(profile, p.chart, p.array, h))


# ---------------------------------------------------------------------------
# dispatch and derived quantities
# ---------------------------------------------------------------------------

def connection(profile: ScaleFactorProfile, p: ChartPoint) -> np.ndarray:
    """Gamma^k_ij by the closed forms where available, else numerically."""
    if p.chart.stereographic:
        return christoffel_closed_batch(profile, p.array)
    return christoffel_numeric_batch(profile, p.chart, p.array)


def riemann_tensor(profile: ScaleFactorProfile, p: ChartPoint) -> np.ndarray:
    if p.chart.stereographic:
        return riemann_closed_batch(profile, p.array)
    return riemann_numeric_batch(profile, p.chart, p.array)


def nabla_riemann_tensor(profile: ScaleFactorProfile, p: ChartPoint) -> np.ndarray:
    if p.chart.stereographic:
        return nabla_riemann_closed_batch(profile, p.array)
    return nabla_riemann_numeric_batch(profile, p.chart, p.array)


def ricci(profile: ScaleFactorProfile, p: ChartPoint) -> np.ndarray:
    """Ricci tensor from the table; cross-checked against the contraction in tests."""
    if p.chart.stereographic:
        return ricci_closed_batch(profile, p.array)
    return ricci_from_riemann(riemann_tensor(profile, p))


def scalar_curvature(profile: ScaleFactorProfile, p: ChartPoint) -> float:
    if p.chart.stereographic:
        return float(scalar_closed_batch(profile, p.array))
    d = metric_diagonal(profile, p.chart, p.array)
    return float(np.sum(np.diagonal(ricci(profile, p)) / d))


def lowered_riemann(riemann: np.ndarray, g: np.ndarray) -> np.ndarray:
    """R_pqij = g_ps R^s_qij."""
    return np.einsum("...ps,...sqij->...pqij", g, riemann)


def constant_curvature_form(g: np.ndarray) -> np.ndarray:
    """T_pqij = g_pi g_qj - g_pj g_qi, so that R_pqij = K T_pqij in constant curvature."""
    return np.einsum("...pi,...qj->...pqij", g, g) - np.einsum("...pj,...qi->...pqij", g, g)


def antisymmetry_residual(riemann: np.ndarray) -> float:
    return float(np.max(np.abs(riemann + np.swapaxes(riemann, -1, -2))))


def first_bianchi_residual(riemann: np.ndarray) -> float:
    """max |R^s_ijk + R^s_kij + R^s_jki|."""
    cyc = (riemann
           + np.einsum("...skij->...sijk", riemann)
           + np.einsum("...sjki->...sijk", riemann))
    return float(np.max(np.abs(cyc)))


def second_bianchi_residual(nabla: np.ndarray) -> float:
    """max |nabla_s R^p_qij + nabla_i R^p_qjs + nabla_j R^p_qsi|."""
    cyc = (nabla
           + np.einsum("...ipqjs->...spqij", nabla)
           + np.einsum("...jpqsi->...spqij", nabla))
    return float(np.max(np.abs(cyc)))


def count_nonzero_christoffel(gamma: np.ndarray, atol: float = 1e-14) -> dict[str, int]:
    """Nonzero Gamma^k_ij counted both with and without the i<->j symmetry."""
    nz = np.abs(gamma) > atol
    ordered = int(np.count_nonzero(nz))
    distinct = sum(bool(nz[k, i, j]) for k in range(4) for i in range(4) for j in range(i, 4))
    return {"ordered": ordered, "symmetric_pairs": distinct}


def relative_error(value: np.ndarray, reference: np.ndarray) -> float:
    """max |value - reference| scaled by max(1, max |reference|)."""
    value = np.asarray(value)
    reference = np.asarray(reference)
    scale = max(1.0, float(np.max(np.abs(reference))) if reference.size else 1.0)
    return float(np.max(np.abs(value - reference))) / scale
