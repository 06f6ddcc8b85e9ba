import numpy as np
import pytest
from hypothesis import given, strategies as st

from frwkilling import (
    Chart,
    ChartPoint,
    ChartProfileMismatch,
    ConfigError,
    SingularPointError,
    constant,
    exponential,
    modified_u,
    north,
    parse_point,
    secant,
    south,
)
from frwkilling.finite_diff import jacobian
from frwkilling.geometry import (
    metric_at,
    metric_diagonal,
    north_to_u,
    transition,
    u_to_north,
    well_conditioned,
)

coord = st.floats(-3.0, 3.0)


def test_transition_unit_sphere_fixed():
    q = transition(north(0.2, 1, 0, 0))
    assert q.chart is Chart.SOUTH and q.coords == (0.2, 1.0, 0.0, 0.0)


def test_transition_inverts_radius():
    assert transition(north(0, 2, 0, 0)).coords == (0.0, 0.5, 0.0, 0.0)


def test_transition_singular_at_origin():
    with pytest.raises(SingularPointError):
        transition(north(1.5, 0, 0, 0))


def test_transition_rejects_u_chart():
    with pytest.raises(ChartProfileMismatch):
        transition(modified_u(0, 1, 0, 0))


@given(coord, coord, coord, coord)
def test_transition_is_an_involution(t, a, b, c):
    p = north(t, a, b, c)
    if p.spatial_norm2 < 1e-6:
        return
    back = transition(transition(p))
    assert back.chart is Chart.NORTH
    np.testing.assert_allclose(back.array, p.array, rtol=1e-14, atol=1e-14)


def test_well_conditioned_switches_outside_unit_ball():
    assert well_conditioned(north(0, 2, 0, 0)).chart is Chart.SOUTH
    assert well_conditioned(north(0, 0.5, 0, 0)).chart is Chart.NORTH


def test_metric_constant_origin():
    np.testing.assert_array_equal(metric_at(constant(2.0), north(0.4, 0, 0, 0)).g, np.diag([4, -16, -16, -16]))


def test_metric_unit_sphere():
    assert metric_at(constant(1.0), north(0, 1, 0, 0)).g[1, 1] == -1.0


def test_metric_u_chart_origin():
    np.testing.assert_array_equal(metric_at(secant(1.0), modified_u(0, 0, 0, 0)).g, np.diag([1, -4, -4, -4]))


def test_u_chart_requires_secant():
    with pytest.raises(ChartProfileMismatch):
        metric_at(exponential(1, 1), modified_u(0, 0, 0, 0))


@given(coord, coord, coord, st.floats(-1.0, 1.0))
def test_metric_inverse_and_signature(a, b, c, t):
    for prof, p in ((exponential(1.3, 0.7), north(t, a, b, c)), (secant(2.0), modified_u(t, a, b, c))):
        m = metric_at(prof, p)
        np.testing.assert_allclose(m.g @ m.g_inv, np.eye(4), rtol=1e-12, atol=1e-12)
        np.testing.assert_array_equal(np.diag(m.g_inv), 1.0 / np.diag(m.g))
        assert m.g[0, 0] > 0 and m.g[1, 1] == m.g[2, 2] == m.g[3, 3] < 0


def test_metric_pullback_through_transition(rng):
    prof = exponential(1.0, 0.5)
    for _ in range(20):
        x = np.r_[rng.uniform(-1, 1), rng.uniform(-2, 2, 3)]
        if x[1:] @ x[1:] < 0.05:
            continue
        to_south = lambda X: X / np.concatenate(
            [np.ones(X.shape[:-1] + (1,)), np.sum(X[..., 1:] ** 2, axis=-1, keepdims=True).repeat(3, -1)], axis=-1)
        J = jacobian(to_south, x, 1e-5)
        gy = np.diag(metric_diagonal(prof, Chart.SOUTH, to_south(x)))
        gx = np.diag(metric_diagonal(prof, Chart.NORTH, x))
        np.testing.assert_allclose(J.T @ gy @ J, gx, rtol=1e-8, atol=1e-8 * np.max(np.abs(gx)))


def test_u_chart_conversion_round_trip():
    p = north(0.7, 0.1, -0.2, 0.3)
    q = north_to_u(p)
    assert q.chart is Chart.MODIFIED_U
    np.testing.assert_allclose(u_to_north(q).array, p.array, rtol=1e-15)


def test_u_metric_is_x_metric_in_new_time():
    # g00 du0^2 = R^2 dx0^2 with dx0/du0 = cos(x0)
    prof = secant(1.5)
    p = north(0.6, 0.2, 0.1, -0.3)
    gx = metric_diagonal(prof, Chart.NORTH, p.array)
    gu = metric_diagonal(prof, Chart.MODIFIED_U, north_to_u(p).array)
    assert gu[0] == pytest.approx(gx[0] * np.cos(0.6) ** 2, rel=1e-14)
    assert gu[1] == pytest.approx(gx[1], rel=1e-14)


def test_parse_point_forms():
    assert parse_point("x:0,0.5,0,0") == north(0, 0.5, 0, 0)
    assert parse_point("u:0,0,0,0").chart is Chart.MODIFIED_U
    assert parse_point("0.2,1,0,0", chart="south") == south(0.2, 1, 0, 0)
    with pytest.raises(ConfigError):
        parse_point("x:1,2,3")
    with pytest.raises(ConfigError):
        parse_point("q:1,2,3,4")


def test_chart_point_needs_four_coordinates():
    with pytest.raises(ValueError):
        ChartPoint(Chart.NORTH, (1.0, 2.0))
