"""Killing equation, its Pfaff system, compatibility analysis and jet transport.

A Killing covector X satisfies nabla_i X_j + nabla_j X_i = 0.  Writing
Y_ij = nabla_i X_j (skew), the pair (X, Y) obeys the closed first-order system

    nabla_i X_j  = Y_ij,
    nabla_i Y_jk = R^s_ijk X_s,

so a Killing field is fixed by its 10-component jet at one point.  Equating
mixed second derivatives of Y gives a pointwise linear constraint on the jet
(the compatibility operator below); the dimension of its kernel bounds the
number of independent Killing fields.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .curvature import (
    christoffel_closed_batch,
    christoffel_numeric_batch,
    nabla_riemann_tensor,
    riemann_closed_batch,
    riemann_numeric_batch,
    riemann_tensor,
    connection,
)
from .errors import ChartExitError, DomainError, RankUnstable
from .finite_diff import gradient
from .geometry import Chart, ChartPoint, metric_diagonal
from .scale_factor import CaseLabel, ScaleFactorProfile, classify_case, eval_R

log = logging.getLogger(__name__)

JET_LABELS = ("X0", "X1", "X2", "X3", "Y01", "Y02", "Y03", "Y12", "Y13", "Y23")
Y_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
COMPAT_ROWS = tuple((i, j, p, q) for i, j in Y_PAIRS for p, q in Y_PAIRS)

DEFAULT_TOL_RANK = 1e-9
# finite-difference curvature carries ~1e-8 relative noise
NUMERIC_TOL_RANK = 1e-5
DEFAULT_FIELD_STEP = 1e-5


def _selectors():
    px = np.zeros((4, 10))
    px[np.arange(4), np.arange(4)] = 1.0
    ey = np.zeros((4, 4, 10))
    for n, (j, k) in enumerate(Y_PAIRS):
        ey[j, k, 4 + n] = 1.0
        ey[k, j, 4 + n] = -1.0
    return px, ey


_PX, _EY = _selectors()


@dataclass(frozen=True)
class KillingJet:
    """Covariant components X_i and the six independent Y_ij (i < j)."""

    X: tuple[float, float, float, float]
    Y: tuple[float, float, float, float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "X", tuple(float(v) for v in self.X))
        object.__setattr__(self, "Y", tuple(float(v) for v in self.Y))
        if len(self.X) != 4 or len(self.Y) != 6:
            raise ValueError("a Killing jet has 4 X and 6 Y components")

    @classmethod
    def from_vector(cls, v) -> "KillingJet":
        v = np.asarray(v, dtype=float)
        return cls(tuple(v[:4]), tuple(v[4:]))

    @classmethod
    def zero(cls) -> "KillingJet":
        return cls((0.0,) * 4, (0.0,) * 6)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.X + self.Y)

    @property
    def Y_full(self) -> np.ndarray:
        """Skew 4x4 matrix with Y_ii = 0 and Y_ji = -Y_ij."""
        return _EY @ self.vector

    def as_dict(self) -> dict[str, float]:
        return dict(zip(JET_LABELS, self.vector.tolist()))


# ---------------------------------------------------------------------------
# index gymnastics and the Killing operator
# ---------------------------------------------------------------------------

def lower_index(profile: ScaleFactorProfile, p: ChartPoint, X_vec) -> np.ndarray:
    return metric_diagonal(profile, p.chart, p.array) * np.asarray(X_vec, dtype=float)


def raise_index(profile: ScaleFactorProfile, p: ChartPoint, X_cov) -> np.ndarray:
    return np.asarray(X_cov, dtype=float) / metric_diagonal(profile, p.chart, p.array)


CovectorField = Callable[[np.ndarray], np.ndarray]


def _batched(field: CovectorField) -> Callable[[np.ndarray], np.ndarray]:
    def call(X: np.ndarray) -> np.ndarray:
        flat = X.reshape(-1, 4)
        out = np.array([np.asarray(field(x), dtype=float) for x in flat])
        return out.reshape(X.shape[:-1] + out.shape[1:])
    return call


def connection_batch(profile: ScaleFactorProfile, chart: Chart, X) -> np.ndarray:
    if chart.stereographic:
        return christoffel_closed_batch(profile, X)
    return christoffel_numeric_batch(profile, chart, X)


def riemann_batch(profile: ScaleFactorProfile, chart: Chart, X) -> np.ndarray:
    if chart.stereographic:
        return riemann_closed_batch(profile, X)
    return riemann_numeric_batch(profile, chart, X)


def covariant_derivative(profile: ScaleFactorProfile, p: ChartPoint, field: CovectorField,
                         h: float = DEFAULT_FIELD_STEP) -> np.ndarray:
    """``D[i, j] = nabla_i X_j`` of a covector field by central differences."""
    f = _batched(field)
    x = p.array
    dX = gradient(f, x, h)  # (i, j) = d_i X_j
    gamma = connection(profile, p)
    return dX - np.einsum("sij,s->ij", gamma, f(x))


def killing_residual(profile: ScaleFactorProfile, p: ChartPoint, field: CovectorField,
                     h: float = DEFAULT_FIELD_STEP) -> np.ndarray:
    """Symmetric part ``nabla_i X_j + nabla_j X_i``; zero for Killing fields."""
    D = covariant_derivative(profile, p, field, h)
    return D + D.T


def ricci_identity_residual(profile: ScaleFactorProfile, p: ChartPoint, field: CovectorField,
                            h_inner: float = 1e-5, h_outer: float = 1e-3) -> float:
    """max |(nabla_i nabla_j - nabla_j nabla_i) X_k + R^s_kij X_s| by nested differences."""
    f = _batched(field)
    chart = p.chart

    def nabla_x(X: np.ndarray) -> np.ndarray:
        dX = gradient(f, X, h_inner)
        return dX - np.einsum("...sij,...s->...ij", connection_batch(profile, chart, X), f(X))

    x = p.array
    D = nabla_x(x)
    dD = gradient(nabla_x, x, h_outer)  # (i, j, k) = d_i (nabla_j X_k)
    gamma = connection(profile, p)
    DD = dD - np.einsum("sij,sk->ijk", gamma, D) - np.einsum("sik,js->ijk", gamma, D)
    comm = DD - np.swapaxes(DD, 0, 1)
    curv = np.einsum("skij,s->ijk", riemann_tensor(profile, p), f(x))
    return float(np.max(np.abs(comm + curv)))


# ---------------------------------------------------------------------------
# Pfaff system
# ---------------------------------------------------------------------------

def pfaff_matrices_from(gamma: np.ndarray, riemann: np.ndarray) -> np.ndarray:
    """Matrices ``A[..., i]`` with d(jet)/dx^i = A_i @ jet, from Gamma and Riemann."""
    dX = _EY + np.einsum("...sij,sa->...ija", gamma, _PX)
    dY = (np.einsum("...sijk,sa->...ijka", riemann, _PX)
          + np.einsum("...sij,ska->...ijka", gamma, _EY)
          + np.einsum("...sik,jsa->...ijka", gamma, _EY))
    rows_y = np.stack([dY[..., :, j, k, :] for j, k in Y_PAIRS], axis=-2)
    return np.concatenate([dX, rows_y], axis=-2)


def pfaff_matrices(profile: ScaleFactorProfile, p: ChartPoint) -> np.ndarray:
    return pfaff_matrices_from(connection(profile, p), riemann_tensor(profile, p))


def pfaff_rhs(profile: ScaleFactorProfile, p: ChartPoint, jet: KillingJet) -> np.ndarray:
    """Coordinate derivatives ``out[i] = d(jet)/dx^i`` (shape 4 x 10)."""
    return pfaff_matrices(profile, p) @ jet.vector


# ---------------------------------------------------------------------------
# compatibility
# ---------------------------------------------------------------------------

def _compat_sides(riem: np.ndarray, nab: np.ndarray, jet_vec: np.ndarray):
    X = _PX @ jet_vec
    Y = _EY @ jet_vec
    lhs = -np.einsum("spij,sq->ijpq", riem, Y) - np.einsum("sqij,ps->ijpq", riem, Y)
    rhs = (np.einsum("isjpq,s->ijpq", nab, X) + np.einsum("sjpq,is->ijpq", riem, Y)
           - np.einsum("jsipq,s->ijpq", nab, X) - np.einsum("sipq,js->ijpq", riem, Y))
    return lhs, rhs


def compat_residual(profile: ScaleFactorProfile, p: ChartPoint, jet: KillingJet) -> np.ndarray:
    """LHS - RHS of the second-order compatibility condition, indexed [i, j, p, q]."""
    lhs, rhs = _compat_sides(riemann_tensor(profile, p), nabla_riemann_tensor(profile, p), jet.vector)
    return lhs - rhs


def x_compat_residual(profile: ScaleFactorProfile, p: ChartPoint, jet: KillingJet) -> np.ndarray:
    """First-level compatibility ``-R^s_kij X_s - R^s_ijk X_s + R^s_jik X_s`` [i, j, k]."""
    riem = riemann_tensor(profile, p)
    X = np.asarray(jet.X)
    return (-np.einsum("skij,s->ijk", riem, X) - np.einsum("sijk,s->ijk", riem, X)
            + np.einsum("sjik,s->ijk", riem, X))


def compat_matrices(riem: np.ndarray, nab: np.ndarray):
    """36x10 matrices of the full residual, its left side and its right side."""
    lhs_cols, rhs_cols = [], []
    for n in range(10):
        e = np.zeros(10)
        e[n] = 1.0
        lhs, rhs = _compat_sides(riem, nab, e)
        lhs_cols.append([lhs[r] for r in COMPAT_ROWS])
        rhs_cols.append([rhs[r] for r in COMPAT_ROWS])
    L = np.array(lhs_cols).T
    Rr = np.array(rhs_cols).T
    return L - Rr, L, Rr


def reduced_matrix(profile: ScaleFactorProfile, x0: float, tol: float = DEFAULT_TOL_RANK) -> np.ndarray:
    """The five reduced compatibility equations as a 5x10 matrix.

    Coefficients that cancel to within ``tol`` of the size of their own
    terms are set to exactly zero; nonzero rows are normalised.
    """
    r, r1, r2, r3 = (eval_R(profile, x0, n) for n in range(4))
    f = 4 * r1**3 - 5 * r2 * r1 * r + r3 * r * r
    f_size = 4 * abs(r1) ** 3 + 5 * abs(r2 * r1 * r) + abs(r3) * r * r
    e = 2 * r1 * r1 - r2 * r + r * r
    e_size = 2 * r1 * r1 + abs(r2) * r + r * r
    if abs(f) <= tol * f_size:
        f = 0.0
    if abs(e) <= tol * e_size:
        e = 0.0
    r1_eff = 0.0 if abs(r1) <= tol * r else r1
    M = np.zeros((5, 10))
    M[0, 0] = f
    M[1, 0] = r1_eff * e
    for n in range(3):
        M[2 + n, 1 + n] = e * r1_eff
        M[2 + n, 4 + n] = -e * r
    norms = np.linalg.norm(M, axis=1)
    nz = norms > 0
    M[nz] /= norms[nz, None]
    return M


def _null_space(M: np.ndarray, threshold: float):
    _, s, vt = np.linalg.svd(M)
    full = np.zeros(vt.shape[0])
    full[: s.size] = np.abs(s)  # no negative zeros in reports
    keep = full > threshold
    return full, vt[~keep], int(keep.sum())


def _projector(basis: np.ndarray) -> np.ndarray:
    if basis.size == 0:
        return np.zeros((10, 10))
    q, _ = np.linalg.qr(basis.T)
    return q @ q.T


def _check_stability(sv: np.ndarray, threshold: float) -> None:
    close = sv[(sv > threshold / 10.0) & (sv < threshold * 10.0)]
    if close.size:
        raise RankUnstable(
            f"singular value(s) {close.tolist()} within a factor 10 of the threshold {threshold:.3e}"
        )


def _gap(sv: np.ndarray, threshold: float, reference: float) -> float:
    kept = sv[sv > threshold]
    dropped = sv[sv <= threshold]
    top = kept.min() if kept.size else reference
    bottom = dropped.max() if dropped.size else 0.0
    return float("inf") if bottom == 0.0 else float(top / bottom)


@dataclass
class CompatReport:
    point: ChartPoint
    matrix: np.ndarray
    singular_values: np.ndarray
    threshold: float
    rank: int
    kernel_dim: int
    kernel_basis: np.ndarray
    case: CaseLabel
    gap: float
    reduced_rank: int | None = None
    reduced_agrees: bool | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "point": {"chart": self.point.chart.value, "coords": list(self.point.coords)},
            "case": self.case.value,
            "rank": self.rank,
            "kernel_dim": self.kernel_dim,
            "threshold": self.threshold,
            "rank_gap": self.gap,
            "singular_values": self.singular_values.tolist(),
            "kernel_basis": self.kernel_basis.tolist(),
            "reduced_rank": self.reduced_rank,
            "reduced_agrees": self.reduced_agrees,
        }


def compat_reference_scale(M: np.ndarray, L: np.ndarray, Rr: np.ndarray) -> float:
    """Size of the uncancelled terms: rank decisions are made relative to it."""
    return max(np.linalg.norm(M, 2), np.linalg.norm(L, 2), np.linalg.norm(Rr, 2))


def default_tol_rank(chart: Chart) -> float:
    return DEFAULT_TOL_RANK if chart.stereographic else NUMERIC_TOL_RANK


def compat_rank(profile: ScaleFactorProfile, p: ChartPoint | None = None,
                tol_rank: float | None = None) -> CompatReport:
    """Rank and kernel of the compatibility operator at ``p`` (default: spatial origin, x0=0).

    Singular values below ``tol_rank`` times the size of the uncancelled terms
    count as zero.  The default is tighter for the closed-form charts than for
    the finite-difference route of the u-chart.
    """
    if p is None:
        lo, hi = profile.safe_interval()
        p = ChartPoint(Chart.NORTH, (0.5 * (lo + hi), 0.0, 0.0, 0.0))
    if tol_rank is None:
        tol_rank = default_tol_rank(p.chart)
    M, L, Rr = compat_matrices(riemann_tensor(profile, p), nabla_riemann_tensor(profile, p))
    ref = compat_reference_scale(M, L, Rr)
    threshold = tol_rank * ref
    sv, kernel, rank = _null_space(M, threshold)
    _check_stability(sv, threshold)
    x0 = p.time
    if p.chart is Chart.MODIFIED_U:
        from .geometry import u0_to_x0
        x0 = float(u0_to_x0(x0))
    report = CompatReport(
        point=p, matrix=M, singular_values=sv, threshold=threshold, rank=rank,
        kernel_dim=10 - rank, kernel_basis=kernel,
        case=classify_case(profile, [x0]), gap=_gap(sv, threshold, ref),
    )
    if p.chart.stereographic:
        red = reduced_matrix(profile, x0, tol_rank)
        rsv, rker, rrank = _null_space(red, 0.5)
        report.reduced_rank = rrank
        report.reduced_agrees = bool(
            rrank == rank and np.allclose(_projector(rker), _projector(kernel), atol=1e-6)
        )
    return report


# ---------------------------------------------------------------------------
# transport along paths
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Curve:
    """A parametrised curve tau in [0, 1] -> coordinates.

    Both callables take an array of parameters of shape ``(n,)`` and return
    shape ``(n, 4)``.
    """

    position: Callable[[np.ndarray], np.ndarray]
    velocity: Callable[[np.ndarray], np.ndarray]

    @classmethod
    def segment(cls, start, end) -> "Curve":
        a = np.asarray(start, dtype=float)
        b = np.asarray(end, dtype=float)
        return cls(lambda t: a + np.multiply.outer(t, b - a),
                   lambda t: np.broadcast_to(b - a, np.shape(t) + (4,)))


def polyline(points: Sequence) -> list[Curve]:
    pts = [np.asarray(p.array if isinstance(p, ChartPoint) else p, dtype=float) for p in points]
    return [Curve.segment(a, b) for a, b in zip(pts[:-1], pts[1:])]


def _tensors_along(profile: ScaleFactorProfile, chart: Chart, X: np.ndarray) -> np.ndarray:
    try:
        return pfaff_matrices_from(connection_batch(profile, chart, X), riemann_batch(profile, chart, X))
    except DomainError as exc:
        raise ChartExitError(f"transport path leaves the chart domain: {exc}") from exc


def _rk4_propagator(profile, chart, curve: Curve, n: int) -> np.ndarray:
    taus = np.linspace(0.0, 1.0, 2 * n + 1)
    A = _tensors_along(profile, chart, curve.position(taus))  # (2n+1, 4, 10, 10)
    B = np.einsum("ni,niab->nab", curve.velocity(taus), A)
    h = 1.0 / n
    phi = np.eye(10)
    for k in range(n):
        b0, bm, b1 = B[2 * k], B[2 * k + 1], B[2 * k + 2]
        k1 = b0 @ phi
        k2 = bm @ (phi + 0.5 * h * k1)
        k3 = bm @ (phi + 0.5 * h * k2)
        k4 = b1 @ (phi + h * k3)
        phi = phi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return phi


def transport_propagator(profile: ScaleFactorProfile, chart: Chart, path, steps: int = 16,
                         tol: float = 1e-9, max_steps: int = 2**14) -> np.ndarray:
    """Linear map taking a jet at the path start to the transported jet at its end.

    Each piece is integrated with classical RK4; the step count doubles until
    the result changes by less than ``tol`` (relative), capped at ``max_steps``.
    """
    if steps < 16:
        raise ValueError("transport needs at least 16 steps")
    curves = [path] if isinstance(path, Curve) else list(path)
    total = np.eye(10)
    for curve in curves:
        n = steps
        prev = _rk4_propagator(profile, chart, curve, n)
        while n < max_steps:
            n *= 2
            cur = _rk4_propagator(profile, chart, curve, n)
            change = np.max(np.abs(cur - prev)) / max(1.0, np.max(np.abs(cur)))
            prev = cur
            if change < tol:
                break
        else:
            log.warning("transport did not reach tolerance %.1e within %d steps", tol, max_steps)
        total = prev @ total
    return total


def _as_path(start: ChartPoint, path):
    if isinstance(path, Curve):
        return [path]
    if isinstance(path, ChartPoint):
        if path.chart is not start.chart:
            raise ChartExitError("transport endpoints must lie in one chart")
        return polyline([start, path])
    items = list(path)
    if items and isinstance(items[0], Curve):
        return items
    for it in items:
        if isinstance(it, ChartPoint) and it.chart is not start.chart:
            raise ChartExitError("transport waypoints must lie in one chart")
    return polyline([start, *items])


def transport_jet(profile: ScaleFactorProfile, start: ChartPoint, jet0: KillingJet, path,
                  steps: int = 16, tol: float = 1e-9) -> KillingJet:
    """Integrate the Pfaff system along ``path`` from ``start``.

    ``path`` may be an end point (straight segment), a list of way points
    (polyline), or :class:`Curve` objects parametrised on [0, 1].
    """
    phi = transport_propagator(profile, start.chart, _as_path(start, path), steps, tol)
    return KillingJet.from_vector(phi @ jet0.vector)


# ---------------------------------------------------------------------------
# dimension of the Killing algebra
# ---------------------------------------------------------------------------

@dataclass
class AlgebraReport:
    dimension: int
    singular_values: np.ndarray
    threshold: float
    gap: float
    pointwise_kernel_dims: list[int]
    kernel_basis: np.ndarray


def algebra_analysis(profile: ScaleFactorProfile, sample_points: Sequence[ChartPoint],
                     tol: float = 1e-7, transport_tol: float = 1e-12) -> AlgebraReport:
    """Jets at the first sample that satisfy the compatibility condition at every sample.

    Jets are carried from the first sample to each other sample by the Pfaff
    transport before the compatibility operator there is applied, so the
    constraint is on one common space of initial data.  Each block is
    normalised by the size of its uncancelled terms.
    """
    points = list(sample_points)
    if len(points) < 3:
        raise ValueError("algebra_dimension needs at least 3 sample points")
    base = points[0]
    blocks = []
    dims = []
    for q in points:
        M, L, Rr = compat_matrices(riemann_tensor(profile, q), nabla_riemann_tensor(profile, q))
        ref = compat_reference_scale(M, L, Rr)
        local = compat_rank(profile, q)
        dims.append(local.kernel_dim)
        if q is base:
            phi = np.eye(10)
        else:
            phi = transport_propagator(profile, base.chart, polyline([base, q]), tol=transport_tol)
        blocks.append(M @ phi / (ref * max(1.0, np.linalg.norm(phi, 2))))
    stacked = np.vstack(blocks)
    sv, kernel, rank = _null_space(stacked, tol)
    _check_stability(sv, tol)
    return AlgebraReport(dimension=10 - rank, singular_values=sv, threshold=tol,
                         gap=_gap(sv, tol, 1.0), pointwise_kernel_dims=dims, kernel_basis=kernel)


def algebra_dimension(profile: ScaleFactorProfile, sample_points: Sequence[ChartPoint],
                      tol: float = 1e-7) -> int:
    """Upper bound on the number of independent Killing fields (exact for the three cases)."""
    return algebra_analysis(profile, sample_points, tol).dimension
