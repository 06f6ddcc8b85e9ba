"""Scale-factor profiles R(x0) of the closed universe and the exceptional cases.

A profile is the function R of the time coordinate x0 (the gauge in which
the metric reads ``R^2 dx0^2 - 4 R^2 |dx|^2 / (|x|^2 + 1)^2``).  Four kinds
are supported:

``constant``     R = a                      (static universe)
``secant``       R = a / cos(x0), |x0|<pi/2 (constant negative curvature)
``exponential``  R = a exp(k x0)
``table``        cubic spline through tabulated (x0, R) knots

The module also carries the pointwise case split between the static and
constant-curvature regimes, the first integral of the constant-curvature
ODE, and the x0 <-> t time transform for the secant solution.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConfigError, DomainError

HALF_PI = 0.5 * math.pi

DEFAULT_SPLINE_TOL = 1e-6


class ProfileKind(str, enum.Enum):
    CONSTANT = "constant"
    SECANT = "secant"
    EXPONENTIAL = "exponential"
    TABLE = "table"


class CaseLabel(str, enum.Enum):
    STATIC = "Static"
    CONSTANT_CURVATURE = "ConstantCurvature"
    GENERIC = "Generic"
    AMBIGUOUS_DEGENERATE = "AmbiguousDegenerate"


@dataclass(frozen=True)
class ScaleFactorProfile:
    """Immutable description of R(x0).

    Use the constructors :func:`constant`, :func:`secant`,
    :func:`exponential` and :func:`table_spline` rather than building this
    directly.
    """

    kind: ProfileKind
    a: float = 1.0
    k: float = 0.0
    knots: tuple[tuple[float, float], ...] = ()
    light_speed_c: float = 1.0
    _spline: CubicSpline | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.light_speed_c <= 0:
            raise ConfigError("light speed must be positive")
        if self.kind is ProfileKind.TABLE:
            if len(self.knots) < 4:
                raise ConfigError("table profile needs at least 4 knots")
            xs = np.array([kn[0] for kn in self.knots], dtype=float)
            rs = np.array([kn[1] for kn in self.knots], dtype=float)
            if np.any(np.diff(xs) <= 0):
                raise ConfigError("table knots must have strictly increasing x0")
            if np.any(rs <= 0):
                raise ConfigError("table values of R must be positive")
            object.__setattr__(self, "_spline", CubicSpline(xs, rs))
        elif self.a <= 0:
            raise ConfigError(f"scale parameter a must be positive, got {self.a}")

    # -- domain ---------------------------------------------------------
    @property
    def domain(self) -> tuple[float, float]:
        """Open interval (closed for tables) of admissible x0."""
        if self.kind is ProfileKind.SECANT:
            return (-HALF_PI, HALF_PI)
        if self.kind is ProfileKind.TABLE:
            return (self.knots[0][0], self.knots[-1][0])
        return (-math.inf, math.inf)

    def safe_interval(self) -> tuple[float, float]:
        """Interval from which sample points draw x0, well inside the domain."""
        if self.kind is ProfileKind.TABLE:
            lo, hi = self.domain
            pad = 0.1 * (hi - lo)
            return (lo + pad, hi - pad)
        return (-1.0, 1.0)

    def contains(self, x0) -> np.ndarray:
        x0 = np.asarray(x0, dtype=float)
        lo, hi = self.domain
        if self.kind is ProfileKind.TABLE:
            return (x0 >= lo) & (x0 <= hi)
        return (x0 > lo) & (x0 < hi)

    def check_domain(self, x0) -> None:
        if not np.all(self.contains(x0)):
            raise DomainError(f"x0 outside the domain {self.domain} of the {self.kind.value} profile")

    # -- evaluation -----------------------------------------------------
    def eval(self, x0, order: int = 0):
        """Return the ``order``-th derivative of R at ``x0`` (scalar or array)."""
        return eval_R(self, x0, order)

    def derivatives(self, x0):
        """Return ``(R, R', R'', R''')`` at ``x0``."""
        return tuple(eval_R(self, x0, n) for n in range(4))

    def describe(self) -> str:
        if self.kind is ProfileKind.CONSTANT:
            return f"constant:{self.a!r}"
        if self.kind is ProfileKind.SECANT:
            return f"secant:{self.a!r}"
        if self.kind is ProfileKind.EXPONENTIAL:
            return f"exponential:{self.a!r},{self.k!r}"
        return f"table:{len(self.knots)} knots"


def constant(a: float, c: float = 1.0) -> ScaleFactorProfile:
    return ScaleFactorProfile(ProfileKind.CONSTANT, a=float(a), light_speed_c=c)


def secant(a: float, c: float = 1.0) -> ScaleFactorProfile:
    return ScaleFactorProfile(ProfileKind.SECANT, a=float(a), light_speed_c=c)


def exponential(a: float, k: float, c: float = 1.0) -> ScaleFactorProfile:
    return ScaleFactorProfile(ProfileKind.EXPONENTIAL, a=float(a), k=float(k), light_speed_c=c)


def table_spline(x0s: Sequence[float], values: Sequence[float], c: float = 1.0) -> ScaleFactorProfile:
    knots = tuple((float(x), float(r)) for x, r in zip(x0s, values))
    return ScaleFactorProfile(ProfileKind.TABLE, knots=knots, light_speed_c=c)


def _sec_derivatives(x0: np.ndarray, order: int) -> np.ndarray:
    s = 1.0 / np.cos(x0)
    t = np.tan(x0)
    if order == 0:
        return s
    if order == 1:
        return s * t
    if order == 2:
        return s * (t * t + s * s)
    # d/dx [sec tan^2 + sec^3] = sec tan^3 + 2 sec^3 tan + 3 sec^3 tan
    return s * t * (t * t + 5.0 * s * s)


def eval_R(profile: ScaleFactorProfile, x0, order: int = 0):
    """n-th derivative of the scale factor, n in 0..3.

    Analytic kinds are exact to rounding; table profiles differentiate the
    cubic spline (the third derivative is piecewise constant).
    """
    if order not in (0, 1, 2, 3):
        raise ValueError(f"derivative order must be 0..3, got {order}")
    scalar = np.ndim(x0) == 0
    x = np.asarray(x0, dtype=float)
    profile.check_domain(x)
    kind = profile.kind
    if kind is ProfileKind.CONSTANT:
        out = np.full_like(x, profile.a if order == 0 else 0.0)
    elif kind is ProfileKind.SECANT:
        out = profile.a * _sec_derivatives(x, order)
    elif kind is ProfileKind.EXPONENTIAL:
        out = profile.a * profile.k**order * np.exp(profile.k * x)
    else:
        out = profile._spline(x, order)
    return float(out) if scalar else out


def ode_residual(profile: ScaleFactorProfile, x0):
    """``2 R'^2 - R'' R + R^2``; vanishes identically for the secant profile."""
    r, r1, r2 = (eval_R(profile, x0, n) for n in range(3))
    return 2.0 * r1 * r1 - r2 * r + r * r


def classify_case(
    profile: ScaleFactorProfile,
    sample_x0s: Iterable[float],
    tol: float | None = None,
) -> CaseLabel:
    """Pointwise case split of the compatibility analysis.

    Static when ``|R'| <= tol |R|`` at every sample, ConstantCurvature when
    ``|2R'^2 - R''R + R^2| <= tol R^2`` at every sample, Generic otherwise.
    Both tests passing at once is reported as AmbiguousDegenerate.
    """
    xs = np.asarray(list(sample_x0s), dtype=float)
    if xs.size == 0:
        raise ValueError("classify_case needs at least one sample")
    if tol is None:
        tol = DEFAULT_SPLINE_TOL if profile.kind is ProfileKind.TABLE else 1e-10
    r = eval_R(profile, xs, 0)
    r1 = eval_R(profile, xs, 1)
    static = bool(np.all(np.abs(r1) <= tol * np.abs(r)))
    curved = bool(np.all(np.abs(ode_residual(profile, xs)) <= tol * r * r))
    if static and curved:
        return CaseLabel.AMBIGUOUS_DEGENERATE
    if static:
        return CaseLabel.STATIC
    if curved:
        return CaseLabel.CONSTANT_CURVATURE
    return CaseLabel.GENERIC


def first_integral_residual(profile: ScaleFactorProfile, x0, C: float):
    """``R'^2 - C R^4 + R^2``; zero iff R obeys the first integral with constant C.

    Any real C is accepted so that wrong constants can be falsified.
    """
    r = eval_R(profile, x0, 0)
    r1 = eval_R(profile, x0, 1)
    return r1 * r1 - C * r**4 + r * r


def _check_open_half_pi(x0) -> np.ndarray:
    x = np.asarray(x0, dtype=float)
    if np.any(np.abs(x) >= HALF_PI):
        raise DomainError("|x0| must be < pi/2 for the secant solution")
    return x


def secant_solution(a: float, x0):
    """Solution ``a / cos(x0)`` of the constant-curvature ODE (shift constant b = 0).

    A nonzero integration constant b only shifts the origin of x0.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    x = _check_open_half_pi(x0)
    out = a / np.cos(x)
    return float(out) if np.ndim(x0) == 0 else out


def time_from_x0(a: float, c: float, x0):
    """Cosmological time ``t = (a/c) ln((1 + sin x0) / cos x0)`` for the secant profile."""
    x = _check_open_half_pi(x0)
    # ln(sec + tan) = asinh(tan), which stays accurate near x0 = 0
    out = (a / c) * np.arcsinh(np.tan(x))
    return float(out) if np.ndim(x0) == 0 else out


def x0_from_time(a: float, c: float, t):
    """Inverse of :func:`time_from_x0`: ``x0 = arcsin(tanh(c t / a))``."""
    tt = np.asarray(t, dtype=float)
    # arctan(sinh) equals arcsin(tanh) but keeps full precision as |x0| -> pi/2
    out = np.arctan(np.sinh(c * tt / a))
    return float(out) if np.ndim(t) == 0 else out


def R_of_time(a: float, c: float, t):
    """Scale factor of the secant solution as a function of time: ``a cosh(c t / a)``."""
    out = a * np.cosh(c * np.asarray(t, dtype=float) / a)
    return float(out) if np.ndim(t) == 0 else out


# -- text construction ----------------------------------------------------

def load_knots_csv(path: str | Path) -> tuple[list[float], list[float]]:
    """Read a knot table with header columns ``x0,R``."""
    xs, rs = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"x0", "R"} <= {f.strip() for f in reader.fieldnames}:
            raise ConfigError(f"{path}: expected CSV columns x0,R")
        for row in reader:
            row = {k.strip(): v for k, v in row.items()}
            xs.append(float(row["x0"]))
            rs.append(float(row["R"]))
    return xs, rs


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


def parse_profile(text: str, base_dir: str | Path | None = None) -> ScaleFactorProfile:
    """Build a profile from either short or key=value text.

    Short form: ``secant:1``, ``constant:2``, ``exponential:1,1``,
    ``table:knots.csv``.  Key form: ``kind=secant a=1.0``,
    ``kind=exponential a=1 k=0.5``, ``kind=table file=knots.csv``; an
    optional ``c=...`` sets the light speed.
    """
    text = text.strip()
    if not text:
        raise ConfigError("empty profile specification")
    if "=" in text:
        fields = {}
        for tok in text.split():
            key, sep, val = tok.partition("=")
            if not sep:
                raise ConfigError(f"expected key=value, got {tok!r}")
            fields[key.strip()] = val.strip()
        unknown = set(fields) - {"kind", "a", "k", "c", "file"}
        if unknown:
            raise ConfigError(f"unknown profile keys: {sorted(unknown)}")
        kind = fields.get("kind")
        try:
            c = float(fields.get("c", 1.0))
            a = float(fields["a"]) if "a" in fields else None
            k = float(fields.get("k", 1.0))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        args = {"a": a, "k": k, "file": fields.get("file")}
    else:
        kind, _, rest = text.partition(":")
        c = 1.0
        if kind == "table":
            args = {"file": rest}
        else:
            nums = _floats(rest)
            args = {"a": nums[0] if nums else None, "k": nums[1] if len(nums) > 1 else 1.0}
    kind = (kind or "").strip().lower()
    if kind == "table":
        fname = args.get("file")
        if not fname:
            raise ConfigError("table profile requires a file")
        path = Path(fname)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        xs, rs = load_knots_csv(path)
        return table_spline(xs, rs, c=c)
    if args.get("a") is None:
        raise ConfigError(f"profile {text!r} is missing the scale parameter a")
    if kind == "constant":
        return constant(args["a"], c=c)
    if kind == "secant":
        return secant(args["a"], c=c)
    if kind in ("exponential", "exp"):
        return exponential(args["a"], args["k"], c=c)
    raise ConfigError(f"unknown profile kind {kind!r}")
