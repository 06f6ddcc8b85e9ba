"""Killing vector fields of the closed homogeneous isotropic universe.

Curvature of the metric ``R^2 dx0^2 - 4 R^2 |dx|^2 / (|x|^2 + 1)^2`` on
R x S^3 in closed form and by finite differences, the Pfaff system for
Killing fields with its compatibility analysis, an explicit catalog of
Killing fields, and the hyperboloid embedding of the constant-curvature case.
"""

from .errors import (
    ChartExitError,
    ChartProfileMismatch,
    ConfigError,
    DomainError,
    FrwKillingError,
    RankUnstable,
    SingularPointError,
    StepTooLarge,
    WitnessNotFound,
    ZeroFieldError,
)
from .geometry import Chart, ChartPoint, modified_u, north, parse_point, south
from .scale_factor import (
    CaseLabel,
    ProfileKind,
    ScaleFactorProfile,
    classify_case,
    constant,
    exponential,
    parse_profile,
    secant,
    table_spline,
)

__version__ = "0.1.0"
