"""Closed-form Killing fields of the closed universe and their causal character.

Six rotational fields exist for every profile: three meridional rotations
``Mer1..Mer3`` and three equatorial rotations ``Eq12, Eq23, Eq31`` of the
spatial sphere.  The static field ``Static0 = d/dx0`` is Killing only for a
constant profile; the four hyperbolic rotations ``Hyp1..Hyp4`` are Killing
only for the secant profile, where they are written in the u-chart.

Coordinates in the north chart are x = (x0, x1, x2, x3); ``s2 = |x|^2`` and
``D = s2 + 1`` throughout.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ChartProfileMismatch, WitnessNotFound, ZeroFieldError
from .geometry import Chart, ChartPoint, metric_diagonal, require_secant
from .killing import KillingJet, Y_PAIRS, covariant_derivative
from .rng import XorShift64Star, child_seed
from .scale_factor import ProfileKind, ScaleFactorProfile, eval_R


class FieldId(str, enum.Enum):
    MER1 = "Mer1"
    MER2 = "Mer2"
    MER3 = "Mer3"
    EQ12 = "Eq12"
    EQ23 = "Eq23"
    EQ31 = "Eq31"
    STATIC0 = "Static0"
    HYP1 = "Hyp1"
    HYP2 = "Hyp2"
    HYP3 = "Hyp3"
    HYP4 = "Hyp4"

    @classmethod
    def parse(cls, name: str) -> "FieldId":
        key = name.strip().lower().replace("_", "").replace("-", "")
        aliases = {
            "meridional1": "mer1", "meridional2": "mer2", "meridional3": "mer3",
            "equatorial12": "eq12", "equatorial23": "eq23", "equatorial31": "eq31",
            "static": "static0", "hyperbolic1": "hyp1", "hyperbolic2": "hyp2",
            "hyperbolic3": "hyp3", "hyperbolic4": "hyp4",
        }
        key = aliases.get(key, key)
        for fid in cls:
            if fid.value.lower() == key:
                return fid
        raise ValueError(f"unknown field id {name!r}")

    @property
    def rotational(self) -> bool:
        return self in ROTATIONAL

    @property
    def hyperbolic(self) -> bool:
        return self in HYPERBOLIC


ROTATIONAL = (FieldId.MER1, FieldId.MER2, FieldId.MER3, FieldId.EQ12, FieldId.EQ23, FieldId.EQ31)
HYPERBOLIC = (FieldId.HYP1, FieldId.HYP2, FieldId.HYP3, FieldId.HYP4)
# coefficient order of a linear combination
COMBINATION_ORDER = ROTATIONAL + HYPERBOLIC


class CausalCharacter(str, enum.Enum):
    TIMELIKE = "TimeLike"
    SPACELIKE = "SpaceLike"
    NULL = "Null"


@dataclass(frozen=True)
class CatalogField:
    id: FieldId
    chart_of_definition: Chart
    validity: str


CATALOG = {
    **{fid: CatalogField(fid, Chart.NORTH, "Killing for every profile") for fid in ROTATIONAL},
    FieldId.STATIC0: CatalogField(FieldId.STATIC0, Chart.NORTH, "Killing only for constant profiles"),
    **{fid: CatalogField(fid, Chart.MODIFIED_U, "Killing only for secant profiles") for fid in HYPERBOLIC},
}

# inversion y = x/|x|^2 maps these fields to minus themselves
_SOUTH_SIGN = {FieldId.MER1: -1.0, FieldId.MER2: -1.0, FieldId.MER3: -1.0, FieldId.HYP4: -1.0}

_AXIS = {FieldId.MER1: 1, FieldId.MER2: 2, FieldId.MER3: 3,
         FieldId.HYP1: 1, FieldId.HYP2: 2, FieldId.HYP3: 3}
_PLANE = {FieldId.EQ12: (1, 2), FieldId.EQ23: (2, 3), FieldId.EQ31: (3, 1)}


def _spatial_part(fid: FieldId, X: np.ndarray) -> np.ndarray:
    """Spatial components of a rotational field, batched over (..., 4)."""
    out = np.zeros(X.shape)
    s2 = X[..., 1] ** 2 + X[..., 2] ** 2 + X[..., 3] ** 2
    if fid in _PLANE:
        i, j = _PLANE[fid]
        out[..., i] = X[..., j]
        out[..., j] = -X[..., i]
        return out
    m = _AXIS[fid]
    for j in (1, 2, 3):
        out[..., j] = X[..., m] * X[..., j]
    out[..., m] = (2 * X[..., m] ** 2 - s2 + 1) / 2
    return out


def _hyperbolic(fid: FieldId, X: np.ndarray, time_factor, th) -> np.ndarray:
    """Hyperbolic field with time coefficient scaled by ``time_factor`` and ``th`` = tanh(u0)."""
    out = np.zeros(X.shape)
    s2 = X[..., 1] ** 2 + X[..., 2] ** 2 + X[..., 3] ** 2
    d = s2 + 1
    if fid is FieldId.HYP4:
        out[..., 0] = (s2 - 1) / d
        for j in (1, 2, 3):
            out[..., j] = X[..., j] * th
    else:
        m = _AXIS[fid]
        out[..., 0] = 2 * X[..., m] / d
        for j in (1, 2, 3):
            out[..., j] = -X[..., m] * X[..., j] * th
        out[..., m] = (s2 - 2 * X[..., m] ** 2 + 1) / 2 * th
    out[..., 0] *= time_factor
    return out


def field_vector_batch(fid: FieldId, profile: ScaleFactorProfile, chart: Chart, X) -> np.ndarray:
    """Contravariant components at coordinates ``X`` of shape (..., 4)."""
    fid = FieldId(fid)
    X = np.asarray(X, dtype=float)
    if chart is Chart.MODIFIED_U:
        require_secant(profile)
    if fid.rotational:
        out = _spatial_part(fid, X)
    elif fid is FieldId.STATIC0:
        out = np.zeros(X.shape)
        # d/dx0 = cosh(u0) d/du0
        out[..., 0] = np.cosh(X[..., 0]) if chart is Chart.MODIFIED_U else 1.0
    elif chart is Chart.MODIFIED_U:
        out = _hyperbolic(fid, X, 1.0, np.tanh(X[..., 0]))
    else:
        # x0 = arctan(sinh u0): d/du0 = cos(x0) d/dx0 and tanh(u0) = sin(x0)
        out = _hyperbolic(fid, X, np.cos(X[..., 0]), np.sin(X[..., 0]))
    if chart is Chart.SOUTH:
        out = out * _SOUTH_SIGN.get(fid, 1.0)
    return out


def field_vector(fid, profile: ScaleFactorProfile, p: ChartPoint) -> np.ndarray:
    """Contravariant components of a catalog field at ``p``.

    Rotational fields and ``Static0`` are available in every chart (the
    u-chart requires a secant profile); hyperbolic fields are native to the
    u-chart and are transported to the stereographic charts through
    ``x0 = arctan(sinh u0)``, which makes them evaluable, though not
    Killing, for other profiles.
    """
    return field_vector_batch(FieldId(fid), profile, p.chart, p.array)


def field_covector_batch(fid, profile: ScaleFactorProfile, chart: Chart, X) -> np.ndarray:
    return metric_diagonal(profile, chart, X) * field_vector_batch(FieldId(fid), profile, chart, X)


def field_covector(fid, profile: ScaleFactorProfile, p: ChartPoint) -> np.ndarray:
    """Covariant components ``X_i = g_ij X^j``."""
    return field_covector_batch(fid, profile, p.chart, p.array)


def covector_table(fid, profile: ScaleFactorProfile, p: ChartPoint) -> np.ndarray:
    """Tabulated covariant components of a rotational field in the north chart."""
    fid = FieldId(fid)
    if not fid.rotational or p.chart is not Chart.NORTH:
        raise ChartProfileMismatch("covector tables cover rotational fields in the north chart")
    x0, x1, x2, x3 = p.coords
    R = float(eval_R(profile, x0))
    s2 = x1 * x1 + x2 * x2 + x3 * x3
    D = s2 + 1
    c = -4 * R * R / D**2
    table = {
        FieldId.MER1: (0.0, -2 * R * R * (2 * x1 * x1 - s2 + 1) / D**2, c * x1 * x2, c * x1 * x3),
        FieldId.MER2: (0.0, c * x2 * x1, -2 * R * R * (2 * x2 * x2 - s2 + 1) / D**2, c * x2 * x3),
        FieldId.MER3: (0.0, c * x3 * x1, c * x3 * x2, -2 * R * R * (2 * x3 * x3 - s2 + 1) / D**2),
        FieldId.EQ12: (0.0, c * x2, -c * x1, 0.0),
        FieldId.EQ23: (0.0, 0.0, c * x3, -c * x2),
        FieldId.EQ31: (0.0, -c * x3, 0.0, c * x1),
    }
    return np.array(table[fid])


def Y_table(fid, profile: ScaleFactorProfile, p: ChartPoint) -> np.ndarray:
    """Tabulated ``Y_ij = nabla_i X_j`` (i < j, order Y01..Y23) in the north chart."""
    fid = FieldId(fid)
    if not fid.rotational or p.chart is not Chart.NORTH:
        raise ChartProfileMismatch("Y tables cover rotational fields in the north chart")
    x0, x1, x2, x3 = p.coords
    R = float(eval_R(profile, x0))
    Rp = float(eval_R(profile, x0, 1))
    s2 = x1 * x1 + x2 * x2 + x3 * x3
    D = s2 + 1
    t = R * Rp / D**2
    u = R * R / D**3
    table = {
        FieldId.MER1: (-2 * t * (2 * x1 * x1 - s2 + 1), -4 * t * x1 * x2, -4 * t * x1 * x3,
                       -8 * u * x2, -8 * u * x3, 0.0),
        FieldId.MER2: (-4 * t * x2 * x1, -2 * t * (2 * x2 * x2 - s2 + 1), -4 * t * x2 * x3,
                       8 * u * x1, 0.0, -8 * u * x3),
        FieldId.MER3: (-4 * t * x3 * x1, -4 * t * x3 * x2, -2 * t * (2 * x3 * x3 - s2 + 1),
                       0.0, 8 * u * x1, 8 * u * x2),
        FieldId.EQ12: (-4 * t * x2, 4 * t * x1, 0.0,
                       4 * u * (2 * x3 * x3 - s2 + 1), -8 * u * x3 * x2, 8 * u * x3 * x1),
        FieldId.EQ23: (0.0, -4 * t * x3, 4 * t * x2,
                       8 * u * x1 * x3, -8 * u * x1 * x2, 4 * u * (2 * x1 * x1 - s2 + 1)),
        FieldId.EQ31: (4 * t * x3, 0.0, -4 * t * x1,
                       8 * u * x2 * x3, -4 * u * (2 * x2 * x2 - s2 + 1), 8 * u * x1 * x2),
    }
    return np.array(table[fid])


def field_Y(fid, profile: ScaleFactorProfile, p: ChartPoint, h: float = 1e-5) -> np.ndarray:
    """``Y_ij = nabla_i X_j`` (i < j) by finite-difference covariant differentiation."""
    fid = FieldId(fid)
    D = covariant_derivative(profile, p, lambda x: field_covector_batch(fid, profile, p.chart, x), h)
    skew = 0.5 * (D - D.T)
    return np.array([skew[i, j] for i, j in Y_PAIRS])


def field_jet(fid, profile: ScaleFactorProfile, p: ChartPoint, h: float = 1e-5) -> KillingJet:
    return KillingJet(tuple(field_covector(fid, profile, p)), tuple(field_Y(fid, profile, p, h)))


def origin_initial_data(fid, profile: ScaleFactorProfile, x0: float) -> KillingJet:
    """Exact jet of a rotational field (or ``Static0``) at the spatial origin of the north chart."""
    fid = FieldId(fid)
    profile.check_domain(x0)
    R = float(eval_R(profile, x0))
    Rp = float(eval_R(profile, x0, 1))
    X = [0.0] * 4
    Y = [0.0] * 6
    if fid in (FieldId.MER1, FieldId.MER2, FieldId.MER3):
        m = _AXIS[fid]
        X[m] = -2 * R * R
        Y[m - 1] = -2 * R * Rp
    elif fid is FieldId.EQ12:
        Y[3] = 4 * R * R
    elif fid is FieldId.EQ23:
        Y[5] = 4 * R * R
    elif fid is FieldId.EQ31:
        Y[4] = -4 * R * R
    elif fid is FieldId.STATIC0:
        X[0] = R * R
        Y[0:3] = [0.0, 0.0, 0.0]
    else:
        raise ChartProfileMismatch(f"{fid.value} has no tabulated initial data at the north origin")
    return KillingJet(tuple(X), tuple(Y))


# ---------------------------------------------------------------------------
# causal character and combinations
# ---------------------------------------------------------------------------

def combination_vector_batch(coefficients, profile: ScaleFactorProfile, chart: Chart, X) -> np.ndarray:
    coefficients = np.asarray(coefficients, dtype=float)
    if coefficients.shape != (len(COMBINATION_ORDER),):
        raise ValueError(f"expected {len(COMBINATION_ORDER)} coefficients")
    if not np.any(coefficients):
        raise ZeroFieldError("the zero combination has no causal character")
    X = np.asarray(X, dtype=float)
    out = np.zeros(X.shape)
    for c, fid in zip(coefficients, COMBINATION_ORDER):
        if c != 0.0:
            out = out + c * field_vector_batch(fid, profile, chart, X)
    return out


def norm_squared_batch(profile: ScaleFactorProfile, chart: Chart, X, V) -> np.ndarray:
    """q = g(V, V) with signature (+, -, -, -)."""
    return np.sum(metric_diagonal(profile, chart, X) * np.asarray(V) ** 2, axis=-1)


def causal_character(field, profile: ScaleFactorProfile, p: ChartPoint) -> tuple[CausalCharacter, float]:
    """Classify a catalog field (by id) or a 10-coefficient combination at ``p``.

    Returns the label and q = g(X, X).  The null band is ``1e-12 |g00|``.
    """
    if isinstance(field, (str, FieldId)):
        V = field_vector(FieldId.parse(field), profile, p)
    else:
        V = combination_vector_batch(field, profile, p.chart, p.array)
    g = metric_diagonal(profile, p.chart, p.array)
    q = float(np.sum(g * V * V))
    tol = 1e-12 * abs(g[0])
    if q > tol:
        return CausalCharacter.TIMELIKE, q
    if q < -tol:
        return CausalCharacter.SPACELIKE, q
    return CausalCharacter.NULL, q


@dataclass(frozen=True)
class Witness:
    coefficients: tuple[float, ...]
    point: ChartPoint
    q: float


SCAN_SPATIAL = np.linspace(-2.0, 2.0, 8)
SCAN_TIMES = np.linspace(-2.0, 2.0, 9)
DESCENT_STEPS = 50


def _scan_grid() -> np.ndarray:
    t, a, b, c = np.meshgrid(SCAN_TIMES, SCAN_SPATIAL, SCAN_SPATIAL, SCAN_SPATIAL, indexing="ij")
    return np.stack([t, a, b, c], axis=-1).reshape(-1, 4)


def find_witness(coefficients, profile: ScaleFactorProfile, chart: Chart = Chart.MODIFIED_U) -> Witness:
    """A point where the combination is not time-like (q <= 0).

    Grid search over 9 time slices and an 8^3 spatial grid, then
    coordinate descent on q from the best grid points.
    """
    coefficients = np.asarray(coefficients, dtype=float)

    def q_of(X):
        return norm_squared_batch(profile, chart, X, combination_vector_batch(coefficients, profile, chart, X))

    grid = _scan_grid()
    if chart is not Chart.MODIFIED_U:
        lo, hi = profile.safe_interval()
        grid[:, 0] = lo + (grid[:, 0] + 2.0) / 4.0 * (hi - lo)
    q = q_of(grid)
    order = np.argsort(q, kind="stable")
    if q[order[0]] <= 0.0:
        x = grid[order[0]]
        return Witness(tuple(coefficients), ChartPoint(chart, tuple(x)), float(q[order[0]]))
    for start in order[:5]:
        x = grid[start].copy()
        best = float(q[start])
        step = 0.25
        for _ in range(DESCENT_STEPS):
            cand = x[None, :] + step * np.vstack([np.eye(4), -np.eye(4)])
            qc = q_of(cand)
            k = int(np.argmin(qc))
            if qc[k] < best:
                x, best = cand[k], float(qc[k])
                if best <= 0.0:
                    return Witness(tuple(coefficients), ChartPoint(chart, tuple(x)), best)
            else:
                step *= 0.5
    raise WitnessNotFound(f"no non-time-like point found for coefficients {coefficients.tolist()}")


def timelike_combination_scan(profile: ScaleFactorProfile, trial_count: int, seed: int) -> list[Witness]:
    """Witnesses that random combinations of the ten fields are never purely time-like."""
    require_secant(profile)
    if trial_count < 1:
        raise ValueError("trial_count must be at least 1")
    witnesses = []
    for n in range(trial_count):
        rng = XorShift64Star(child_seed(seed, n))
        coeffs = rng.normals(len(COMBINATION_ORDER))
        witnesses.append(find_witness(coeffs, profile))
    return witnesses


def is_killing_for(fid, profile: ScaleFactorProfile) -> bool:
    """Whether the catalog field is a Killing field of this profile's metric."""
    fid = FieldId(fid)
    if fid.rotational:
        return True
    if fid is FieldId.STATIC0:
        return profile.kind is ProfileKind.CONSTANT
    return profile.kind is ProfileKind.SECANT


def native_chart(fid) -> Chart:
    return CATALOG[FieldId(fid)].chart_of_definition


__all__ = [
    "FieldId", "CausalCharacter", "CatalogField", "CATALOG", "ROTATIONAL", "HYPERBOLIC",
    "COMBINATION_ORDER", "Witness", "field_vector", "field_vector_batch", "field_covector",
    "field_covector_batch", "covector_table", "Y_table", "field_Y", "field_jet",
    "origin_initial_data", "combination_vector_batch", "norm_squared_batch", "causal_character",
    "find_witness", "timelike_combination_scan", "is_killing_for", "native_chart",
]
