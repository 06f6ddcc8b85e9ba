import numpy as np
import pytest
from hypothesis import settings

from frwkilling import constant, exponential, secant

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20260316)


THREE_PROFILES = {
    "constant": constant(2.0),
    "exponential": exponential(1.0, 1.0),
    "secant": secant(1.0),
}


@pytest.fixture(params=sorted(THREE_PROFILES))
def profile(request):
    return THREE_PROFILES[request.param]


def random_points(rng, n, radius=0.8, t_range=(-1.0, 1.0)):
    t = rng.uniform(*t_range, size=n)
    xs = rng.uniform(-radius, radius, size=(n, 3)) / np.sqrt(3)
    return np.column_stack([t, xs])


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    """Record a one-line verdict for an acceptance criterion and print it."""
    def record(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
