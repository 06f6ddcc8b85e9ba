import numpy as np
import pytest

from frwkilling import (
    ChartProfileMismatch,
    ZeroFieldError,
    constant,
    exponential,
    modified_u,
    north,
    secant,
    south,
)
from frwkilling import catalog as cat
from frwkilling.catalog import CausalCharacter, FieldId
from frwkilling.finite_diff import jacobian
from frwkilling.geometry import Chart, north_to_u, transition
from frwkilling.scale_factor import eval_R
from frwkilling.verify import max_killing_residual

from conftest import THREE_PROFILES, random_points


def test_parse_aliases():
    assert FieldId.parse("eq12") is FieldId.EQ12
    assert FieldId.parse("Hyp4") is FieldId.HYP4
    assert FieldId.parse("static0") is FieldId.STATIC0
    with pytest.raises(ValueError):
        FieldId.parse("Rot7")


def test_catalog_metadata():
    assert len(cat.CATALOG) == 11
    assert cat.native_chart("Hyp2") is Chart.MODIFIED_U
    assert cat.native_chart("Mer3") is Chart.NORTH
    assert cat.COMBINATION_ORDER[:6] == cat.ROTATIONAL


# -- spot values -----------------------------------------------------------------------

def test_eq12_vector():
    v = cat.field_vector("Eq12", constant(1.0), north(0.4, 0.1, 0.2, 0))
    np.testing.assert_allclose(v, [0, 0.2, -0.1, 0])


def test_mer1_vector_at_origin():
    np.testing.assert_allclose(cat.field_vector("Mer1", exponential(1, 1), north(0, 0, 0, 0)), [0, 0.5, 0, 0])


def test_hyp4_vector_at_u_origin():
    np.testing.assert_allclose(cat.field_vector("Hyp4", secant(1.0), modified_u(0, 0, 0, 0)), [-1, 0, 0, 0])


def test_mer1_covector_at_origin():
    np.testing.assert_allclose(cat.field_covector("Mer1", constant(1.0), north(0, 0, 0, 0)), [0, -2, 0, 0])


def test_Y_spot_values():
    assert cat.Y_table("Eq12", exponential(1, 1), north(0, 0, 0, 0))[3] == pytest.approx(4.0)
    assert cat.Y_table("Mer2", secant(1.0), north(0, 0, 0, 0))[1] == pytest.approx(0.0)


# -- tables versus metric lowering and finite differences ----------------------------

@pytest.mark.parametrize("fid", cat.ROTATIONAL)
def test_covector_table_matches_lowering(fid, profile, rng):
    for x in random_points(rng, 6):
        p = north(*x)
        np.testing.assert_allclose(cat.covector_table(fid, profile, p), cat.field_covector(fid, profile, p),
                                   rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("fid", cat.ROTATIONAL)
def test_Y_table_matches_finite_differences(fid, profile, rng):
    for x in random_points(rng, 4):
        p = north(*x)
        tab = cat.Y_table(fid, profile, p)
        np.testing.assert_allclose(tab, cat.field_Y(fid, profile, p), atol=1e-7 * max(1.0, np.max(np.abs(tab))))


def test_tables_reject_other_fields():
    with pytest.raises(ChartProfileMismatch):
        cat.covector_table("Hyp1", secant(1.0), north(0, 0, 0, 0))
    with pytest.raises(ChartProfileMismatch):
        cat.Y_table("Mer1", constant(1.0), south(0, 1, 0, 0))


def test_origin_initial_data_matches_tables(profile):
    p = north(0.2, 0, 0, 0)
    for fid in cat.ROTATIONAL:
        j = cat.origin_initial_data(fid, profile, 0.2)
        np.testing.assert_allclose(j.X, cat.covector_table(fid, profile, p), atol=1e-14)
        np.testing.assert_allclose(j.Y, cat.Y_table(fid, profile, p), atol=1e-14)


def test_origin_initial_data_static_and_hyperbolic():
    j = cat.origin_initial_data("Static0", constant(2.0), 0.0)
    assert j.X == (4.0, 0.0, 0.0, 0.0) and not any(j.Y)
    with pytest.raises(ChartProfileMismatch):
        cat.origin_initial_data("Hyp1", secant(1.0), 0.0)


# -- chart changes ---------------------------------------------------------------------

@pytest.mark.parametrize("fid", [f for f in FieldId])
def test_south_components_are_pushforwards(fid):
    prof = secant(1.0)
    for x in [(0.3, 0.4, -0.5, 0.6), (-0.2, 1.5, 0.3, -0.7)]:
        p = north(*x)
        q = transition(p)
        assert q.chart is Chart.SOUTH
        J = jacobian(lambda X: np.concatenate(
            [X[..., :1], X[..., 1:] / np.sum(X[..., 1:] ** 2, axis=-1, keepdims=True)], axis=-1), p.array, 1e-6)
        np.testing.assert_allclose(cat.field_vector(fid, prof, q), J @ cat.field_vector(fid, prof, p),
                                   atol=1e-8)


@pytest.mark.parametrize("fid", cat.HYPERBOLIC)
def test_hyperbolic_north_components_are_pushforwards(fid):
    prof = secant(1.0)
    p = north(0.4, 0.3, -0.2, 0.5)
    u = north_to_u(p)
    vn = cat.field_vector(fid, prof, p)
    vu = cat.field_vector(fid, prof, u)
    np.testing.assert_allclose(vn[0], np.cos(0.4) * vu[0], atol=1e-12)
    np.testing.assert_allclose(vn[1:], vu[1:], atol=1e-12)


def test_u_chart_requires_secant():
    with pytest.raises(ChartProfileMismatch):
        cat.field_vector("Hyp1", constant(1.0), modified_u(0, 0, 0, 0))


# -- validity matrix -------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(THREE_PROFILES))
@pytest.mark.parametrize("fid", [f for f in FieldId])
def test_killing_validity_matrix(fid, name, rng):
    prof = THREE_PROFILES[name]
    pts = [north(*x) for x in random_points(rng, 4)]
    res = max_killing_residual(fid, prof, pts)
    if cat.is_killing_for(fid, prof):
        assert res < 1e-6
    else:
        assert res > 1e-3


# -- causal character ------------------------------------------------------------------

def test_static_field_is_timelike_on_constant():
    label, q = cat.causal_character("Static0", constant(2.0), north(0.3, 0.2, 0.1, 0))
    assert label is CausalCharacter.TIMELIKE and q == pytest.approx(4.0)


def test_rotation_is_spacelike():
    label, q = cat.causal_character("Eq12", constant(1.0), north(0, 0.3, 0.2, 0))
    assert label is CausalCharacter.SPACELIKE and q < 0


def test_rotation_null_at_axis():
    label, q = cat.causal_character("Eq12", constant(1.0), north(0, 0, 0, 0.5))
    assert label is CausalCharacter.NULL and q == 0.0


def test_hyp4_not_timelike_off_origin():
    label, _ = cat.causal_character("Hyp4", secant(1.0), modified_u(0, 1, 0, 0))
    assert label in (CausalCharacter.NULL, CausalCharacter.SPACELIKE)


def test_zero_combination_rejected():
    with pytest.raises(ZeroFieldError):
        cat.causal_character(np.zeros(10), secant(1.0), modified_u(0, 0, 0, 0))


def test_combination_is_linear():
    prof = secant(1.0)
    c = np.arange(1.0, 11.0)
    X = np.array([0.2, 0.3, -0.1, 0.4])
    expected = sum(ci * cat.field_vector_batch(f, prof, Chart.MODIFIED_U, X) for ci, f in zip(c, cat.COMBINATION_ORDER))
    np.testing.assert_allclose(cat.combination_vector_batch(c, prof, Chart.MODIFIED_U, X), expected, atol=1e-12)


@pytest.mark.parametrize("fid", ["Eq12", "Hyp4", "Hyp1"])
def test_pure_fields_have_witnesses(fid):
    c = np.zeros(10)
    c[cat.COMBINATION_ORDER.index(FieldId(fid))] = 1.0
    w = cat.find_witness(c, secant(1.0))
    assert w.q <= 0.0


def test_scan_finds_witness_for_every_trial():
    prof = secant(1.0)
    ws = cat.timelike_combination_scan(prof, 100, 42)
    assert len(ws) == 100
    for w in ws:
        V = cat.combination_vector_batch(w.coefficients, prof, w.point.chart, w.point.array)
        assert cat.norm_squared_batch(prof, w.point.chart, w.point.array, V) <= 0.0


def test_scan_is_deterministic():
    a = cat.timelike_combination_scan(secant(1.0), 5, 7)
    b = cat.timelike_combination_scan(secant(1.0), 5, 7)
    assert a == b


def test_scan_requires_secant():
    with pytest.raises(ChartProfileMismatch):
        cat.timelike_combination_scan(constant(1.0), 3, 1)


def test_static_alone_is_always_timelike_on_constant(rng):
    prof = constant(1.0)
    for x in random_points(rng, 50):
        label, q = cat.causal_character("Static0", prof, north(*x))
        assert label is CausalCharacter.TIMELIKE
        assert q == pytest.approx(float(eval_R(prof, x[0])) ** 2, rel=1e-14)
