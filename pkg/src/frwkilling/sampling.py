"""Deterministic sample points for verification runs."""

from __future__ import annotations

import math

from .errors import ConfigError
from .geometry import Chart, ChartPoint
from .rng import XorShift64Star
from .scale_factor import ScaleFactorProfile

BALL_RADIUS = 0.9


def sample_points(chart: Chart | str, count: int, seed: int,
                  profile: ScaleFactorProfile | None = None) -> list[ChartPoint]:
    """Pseudo-random chart points, identical bit-for-bit for the same seed.

    Each point draws its time coordinate uniformly from the profile's safe
    interval (``(-1, 1)`` without a profile), then spatial coordinates
    uniformly in the ball ``|x| < 0.9`` by rejection from the cube.
    """
    if count < 1:
        raise ConfigError(f"sample count must be at least 1, got {count}")
    chart = Chart.parse(chart)
    lo, hi = profile.safe_interval() if profile is not None else (-1.0, 1.0)
    rng = XorShift64Star(seed)
    points = []
    for _ in range(count):
        t = rng.uniform(lo, hi)
        while True:
            xs = [rng.uniform(-BALL_RADIUS, BALL_RADIUS) for _ in range(3)]
            if math.fsum(v * v for v in xs) < BALL_RADIUS**2:
                break
        points.append(ChartPoint(chart, (t, *xs)))
    return points
