import numpy as np
import pytest
from hypothesis import given, strategies as st

from frwkilling import ChartProfileMismatch, StepTooLarge, constant, exponential, modified_u, north, secant
from frwkilling.curvature import (
    antisymmetry_residual,
    christoffel_closed,
    christoffel_closed_batch,
    christoffel_numeric,
    christoffel_numeric_batch,
    constant_curvature_form,
    count_nonzero_christoffel,
    first_bianchi_residual,
    lowered_riemann,
    nabla_riemann_closed,
    nabla_riemann_closed_batch,
    nabla_riemann_numeric,
    nabla_riemann_numeric_batch,
    relative_error,
    ricci,
    ricci_closed_batch,
    ricci_from_riemann,
    riemann_closed,
    riemann_closed_batch,
    riemann_numeric,
    riemann_numeric_batch,
    scalar_curvature,
    second_bianchi_residual,
)
from frwkilling.geometry import Chart, metric_at

from conftest import random_points


# -- closed forms at special points ------------------------------------------------

def test_christoffel_constant_profile():
    g = christoffel_closed(constant(3.0), north(0.2, 0.5, 0, 0)).gamma
    assert g[1, 1, 1] == pytest.approx(-0.8)
    assert g[2, 1, 2] == pytest.approx(-0.8)
    assert g[0, 1, 1] == 0.0
    assert np.all(g[0] == 0) and np.all(g[:, 0, :] == 0) and np.all(g[:, :, 0] == 0)


def test_christoffel_exponential_origin():
    g = christoffel_closed(exponential(1.0, 1.0), north(0, 0, 0, 0)).gamma
    assert g[0, 0, 0] == pytest.approx(1.0)
    assert g[0, 1, 1] == pytest.approx(4.0)


def test_christoffel_is_symmetric(profile, rng):
    g = christoffel_closed_batch(profile, random_points(rng, 10))
    np.testing.assert_array_equal(g, np.swapaxes(g, -1, -2))


def test_christoffel_count_reported():
    counts = count_nonzero_christoffel(christoffel_closed(exponential(1, 1), north(0.1, 0.2, 0.3, 0.4)).gamma)
    assert counts == {"ordered": 31, "symmetric_pairs": 22}


def test_closed_forms_reject_u_chart():
    with pytest.raises(ChartProfileMismatch):
        christoffel_closed(secant(1.0), modified_u(0, 0, 0, 0))
    with pytest.raises(ChartProfileMismatch):
        nabla_riemann_closed(secant(1.0), modified_u(0, 0, 0, 0))


def test_numeric_christoffel_examples():
    assert christoffel_numeric(constant(1.0), north(0, 0.5, 0, 0), 1e-5).gamma[1, 1, 1] == pytest.approx(-0.8, abs=1e-8)
    assert christoffel_numeric(exponential(1, 1), north(0, 0, 0, 0), 1e-5).gamma[0, 0, 0] == pytest.approx(1.0, abs=1e-8)


def test_numeric_christoffel_u_chart_origin():
    g = christoffel_numeric(secant(1.0), modified_u(0, 0, 0, 0), 1e-5).gamma
    assert abs(g[0, 1, 1]) < 1e-9 and abs(g[1, 0, 1]) < 1e-9


def test_numeric_step_limit():
    with pytest.raises(StepTooLarge):
        christoffel_numeric(constant(1.0), north(0, 0, 0, 0), 0.1)


def test_riemann_constant_origin():
    c = riemann_closed(constant(1.0), north(0, 0, 0, 0))
    assert c.riemann[1, 2, 1, 2] == pytest.approx(4.0)
    assert c.riemann[0, 1, 0, 1] == 0.0


def test_scalar_values():
    assert scalar_curvature(constant(2.0), north(0.3, 0.4, -0.1, 0.2)) == pytest.approx(-1.5, abs=1e-12)
    assert scalar_curvature(secant(1.0), north(0.9, 0.1, 0.5, -0.3)) == pytest.approx(-12.0, abs=1e-12)


def test_ricci_values():
    r = ricci(constant(1.0), north(0, 0, 0, 0))
    assert r[0, 0] == 0.0 and r[1, 1] == pytest.approx(8.0)
    assert ricci(exponential(1, 1), north(0, 0, 0, 0))[0, 0] == pytest.approx(0.0, abs=1e-14)
    assert ricci(secant(1.0), north(0, 0, 0, 0))[0, 0] == pytest.approx(-3.0)


def test_ricci_table_matches_contraction(profile, rng):
    X = random_points(rng, 20)
    np.testing.assert_allclose(ricci_closed_batch(profile, X), ricci_from_riemann(riemann_closed_batch(profile, X)),
                               atol=1e-10)


def test_ricci_diagonal_and_symmetric(profile, rng):
    r = ricci_closed_batch(profile, random_points(rng, 10))
    off = r - np.einsum("...ii->...i", r)[..., None] * np.eye(4)
    assert np.max(np.abs(off)) == 0.0


def test_nabla_riemann_constant_vanishes(rng):
    assert np.max(np.abs(nabla_riemann_closed_batch(constant(1.7), random_points(rng, 10)))) == 0.0


def test_nabla_riemann_secant_vanishes(rng):
    X = random_points(rng, 10)
    assert np.max(np.abs(nabla_riemann_closed_batch(secant(1.0), X))) < 1e-8
    assert np.max(np.abs(nabla_riemann_numeric_batch(secant(1.0), Chart.NORTH, X))) < 1e-6


def test_nabla_riemann_exponential_origin():
    n = nabla_riemann_closed(exponential(1, 1), north(0, 0, 0, 0)).nabla_riemann
    assert n[0, 1, 0, 0, 1] == 0.0
    assert n[0, 1, 2, 1, 2] == pytest.approx(-16.0)


# -- identities ----------------------------------------------------------------------

def test_closed_identities(profile, rng):
    R = riemann_closed_batch(profile, random_points(rng, 30))
    assert antisymmetry_residual(R) == 0.0
    assert first_bianchi_residual(R) < 1e-10


def test_numeric_identities(profile, rng):
    R = riemann_numeric_batch(profile, Chart.NORTH, random_points(rng, 10))
    assert antisymmetry_residual(R) < 1e-10
    assert first_bianchi_residual(R) < 1e-10


def test_second_bianchi(profile, rng):
    X = random_points(rng, 10)
    assert second_bianchi_residual(nabla_riemann_closed_batch(profile, X)) < 1e-10
    assert second_bianchi_residual(nabla_riemann_numeric_batch(profile, Chart.NORTH, X)) < 1e-8


def test_secant_constant_curvature_law(rng):
    a = 1.3
    prof = secant(a)
    for x in random_points(rng, 10):
        p = north(*x)
        g = metric_at(prof, p).g
        R = lowered_riemann(riemann_closed(prof, p).riemann, g)
        np.testing.assert_allclose(R, -constant_curvature_form(g) / a**2, atol=1e-8 * np.max(np.abs(R)))


# -- oracle equivalence -------------------------------------------------------------------

def test_closed_vs_numeric(profile, rng):
    X = random_points(rng, 25)
    pairs = [
        (christoffel_closed_batch(profile, X), christoffel_numeric_batch(profile, Chart.NORTH, X), 1e-7),
        (riemann_closed_batch(profile, X), riemann_numeric_batch(profile, Chart.NORTH, X), 1e-6),
        (nabla_riemann_closed_batch(profile, X), nabla_riemann_numeric_batch(profile, Chart.NORTH, X), 1e-6),
    ]
    for closed, numeric, tol in pairs:
        assert max(relative_error(closed[k], numeric[k]) for k in range(len(X))) < tol


def test_point_wrappers_agree_with_batches():
    prof = exponential(0.8, 0.6)
    p = north(0.3, 0.2, -0.4, 0.1)
    np.testing.assert_allclose(riemann_numeric(prof, p).riemann, riemann_closed(prof, p).riemann, atol=1e-8)
    np.testing.assert_allclose(nabla_riemann_numeric(prof, p).nabla_riemann,
                               nabla_riemann_closed(prof, p).nabla_riemann, atol=1e-6)
    c = riemann_numeric(prof, p)
    assert c.scalar == pytest.approx(scalar_curvature(prof, p), rel=1e-8)


def test_u_chart_scalar_is_constant():
    for u0 in (-0.8, 0.0, 0.7):
        assert scalar_curvature(secant(2.0), modified_u(u0, 0.3, -0.2, 0.1)) == pytest.approx(-3.0, rel=1e-7)


@given(st.floats(-0.9, 0.9), st.floats(-2.0, 2.0), st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))
def test_closed_riemann_antisymmetric_everywhere(t, a, b, c):
    R = riemann_closed_batch(exponential(1.1, -0.4), np.array([t, a, b, c]))
    assert antisymmetry_residual(R) == 0.0


def test_relative_error_scale():
    assert relative_error(np.array([1e-7]), np.array([0.0])) == pytest.approx(1e-7)
    assert relative_error(np.array([101.0]), np.array([100.0])) == pytest.approx(0.01)
