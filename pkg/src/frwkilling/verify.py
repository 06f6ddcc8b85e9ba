"""Verification suites that assemble :class:`VerificationReport` records.

Each suite evaluates one family of checks for a profile over deterministic
sample points and appends ``{name, max_residual, tolerance, pass}`` records.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import catalog as cat
from .curvature import (
    antisymmetry_residual,
    christoffel_closed_batch,
    christoffel_numeric_batch,
    first_bianchi_residual,
    nabla_riemann_closed_batch,
    nabla_riemann_numeric_batch,
    relative_error,
    ricci_closed_batch,
    ricci_from_riemann,
    riemann_closed_batch,
    riemann_numeric_batch,
    scalar_closed_batch,
)
from .embedding import embed, hyperboloid_residual, metric_deviation, sectional_curvature_check
from .geometry import Chart, ChartPoint, north
from .killing import (
    algebra_analysis,
    compat_rank,
    killing_residual,
    polyline,
    ricci_identity_residual,
    transport_propagator,
)
from .report import VerificationReport
from .sampling import sample_points
from .scale_factor import (
    CaseLabel,
    ProfileKind,
    ScaleFactorProfile,
    classify_case,
    eval_R,
    first_integral_residual,
    ode_residual,
    time_from_x0,
    x0_from_time,
)

DEFAULT_TOLERANCES = {
    "gamma": 1e-7,
    "riemann": 1e-6,
    "ricci": 1e-6,
    "nabla_riemann": 1e-6,
    "identity": 1e-10,
    "ricci_identity": 1e-5,
    "scalar": 1e-8,
    "killing": 1e-6,
    "rank_gap": 1e6,
    "transport": 1e-6,
    "ode": 1e-10,
    "hyperboloid": 1e-12,
    "induced_metric": 1e-7,
    "sectional": 1e-6,
}

EXPECTED_DIMENSION = {
    CaseLabel.STATIC: 7,
    CaseLabel.CONSTANT_CURVATURE: 10,
    CaseLabel.GENERIC: 6,
}


def _scalar_expected(profile: ScaleFactorProfile) -> float | None:
    if profile.kind is ProfileKind.CONSTANT:
        return -6.0 / profile.a**2
    if profile.kind is ProfileKind.SECANT:
        return -12.0 / profile.a**2
    return None


def curvature_suite(report: VerificationReport, profile: ScaleFactorProfile,
                    points: Sequence[ChartPoint], tol: dict) -> None:
    X = np.array([p.array for p in points])
    g_c = christoffel_closed_batch(profile, X)
    g_n = christoffel_numeric_batch(profile, Chart.NORTH, X)
    r_c = riemann_closed_batch(profile, X)
    r_n = riemann_numeric_batch(profile, Chart.NORTH, X)
    n_c = nabla_riemann_closed_batch(profile, X)
    n_n = nabla_riemann_numeric_batch(profile, Chart.NORTH, X)
    ric_c = ricci_closed_batch(profile, X)
    ric_n = ricci_from_riemann(r_n)
    per = lambda a, b: max(relative_error(a[k], b[k]) for k in range(len(points)))
    report.add("christoffel_closed_vs_numeric", per(g_c, g_n), tol["gamma"])
    report.add("riemann_closed_vs_numeric", per(r_c, r_n), tol["riemann"])
    report.add("ricci_closed_vs_numeric", per(ric_c, ric_n), tol["ricci"])
    report.add("nabla_riemann_closed_vs_numeric", per(n_c, n_n), tol["nabla_riemann"])
    report.add("riemann_antisymmetry", max(antisymmetry_residual(r_c), antisymmetry_residual(r_n)),
               tol["identity"])
    report.add("first_bianchi", max(first_bianchi_residual(r_c), first_bianchi_residual(r_n)),
               tol["identity"])
    expected = _scalar_expected(profile)
    if expected is not None:
        s = scalar_closed_batch(profile, X)
        report.add("scalar_curvature_value", float(np.max(np.abs(s - expected))), tol["scalar"])


def _field_chart(fid: cat.FieldId, profile: ScaleFactorProfile) -> Chart:
    if fid.hyperbolic and profile.kind is ProfileKind.SECANT:
        return Chart.MODIFIED_U
    return Chart.NORTH


def max_killing_residual(fid, profile: ScaleFactorProfile, points: Sequence[ChartPoint]) -> float:
    fid = cat.FieldId(fid)
    chart = _field_chart(fid, profile)
    worst = 0.0
    for p in points:
        q = ChartPoint(chart, p.coords)
        res = killing_residual(profile, q, lambda x: cat.field_covector_batch(fid, profile, chart, x))
        worst = max(worst, float(np.max(np.abs(res))))
    return worst


def killing_suite(report: VerificationReport, profile: ScaleFactorProfile,
                  points: Sequence[ChartPoint], tol: dict) -> None:
    rot = max(max_killing_residual(fid, profile, points) for fid in cat.ROTATIONAL)
    report.add("killing_rotational", rot, tol["killing"])
    static = max_killing_residual(cat.FieldId.STATIC0, profile, points)
    if cat.is_killing_for(cat.FieldId.STATIC0, profile):
        report.add("killing_static0", static, tol["killing"])
    else:
        report.add("static0_not_killing", static, tol["killing"], expect="above")
    if profile.kind is ProfileKind.SECANT:
        hyp = max(max_killing_residual(fid, profile, points) for fid in cat.HYPERBOLIC)
        report.add("killing_hyperbolic", hyp, tol["killing"])
    else:
        hyp = min(max_killing_residual(fid, profile, points) for fid in cat.HYPERBOLIC)
        report.add("hyperbolic_not_killing", hyp, tol["killing"], expect="above")


def ricci_identity_suite(report: VerificationReport, profile: ScaleFactorProfile,
                         points: Sequence[ChartPoint], tol: dict) -> None:
    worst = 0.0
    for p in points:
        for fid in cat.ROTATIONAL:
            worst = max(worst, ricci_identity_residual(
                profile, p, lambda x, f=fid: cat.field_covector_batch(f, profile, Chart.NORTH, x)))
    report.add("ricci_identity", worst, tol["ricci_identity"])


def compat_suite(report: VerificationReport, profile: ScaleFactorProfile,
                 points: Sequence[ChartPoint], tol: dict) -> dict:
    origin = compat_rank(profile)
    report.add("compat_rank_gap_inverse", 1.0 / origin.gap, 1.0 / tol["rank_gap"])
    report.add("reduced_equations_disagree",
               0.0 if origin.reduced_agrees else 1.0, 0.0)
    base = north(origin.point.time, 0.0, 0.0, 0.0)
    alg = algebra_analysis(profile, [base, *points])
    report.add("algebra_rank_gap_inverse", 1.0 / alg.gap, 1.0 / tol["rank_gap"])
    case = classify_case(profile, [p.time for p in points] + [base.time])
    summary = {
        "case": case.value,
        "compat_rank": origin.rank,
        "compat_kernel_dim": origin.kernel_dim,
        "compat_singular_values": origin.singular_values.tolist(),
        "algebra_dimension": alg.dimension,
        "algebra_singular_values": alg.singular_values.tolist(),
        "pointwise_kernel_dims": alg.pointwise_kernel_dims,
    }
    if case in EXPECTED_DIMENSION:
        report.add("algebra_dimension_mismatch", abs(alg.dimension - EXPECTED_DIMENSION[case]), 0.0)
    return summary


def transport_suite(report: VerificationReport, profile: ScaleFactorProfile,
                    points: Sequence[ChartPoint], tol: dict) -> None:
    lo, hi = profile.safe_interval()
    x0 = 0.5 * (lo + hi)
    start = north(x0, 0.0, 0.0, 0.0)
    jets = [cat.origin_initial_data(fid, profile, x0) for fid in cat.ROTATIONAL]
    closure = 0.0
    paths = 0.0
    for k, q in enumerate(points):
        phi = transport_propagator(profile, Chart.NORTH, polyline([start, q]))
        via = points[(k + 1) % len(points)]
        phi2 = transport_propagator(profile, Chart.NORTH, polyline([start, via, q]))
        for fid, jet in zip(cat.ROTATIONAL, jets):
            got = phi @ jet.vector
            ref = cat.field_covector(fid, profile, q)
            closure = max(closure, relative_error(got[:4], ref))
            paths = max(paths, relative_error(phi2 @ jet.vector, got))
    report.add("transport_closure", closure, tol["transport"])
    report.add("transport_path_independence", paths, tol["transport"])


def ode_suite(report: VerificationReport, profile: ScaleFactorProfile,
              points: Sequence[ChartPoint], tol: dict) -> None:
    a = profile.a
    c = profile.light_speed_c
    x0 = np.array([p.time for p in points])
    r = eval_R(profile, x0)
    report.add("ode_residual", float(np.max(np.abs(ode_residual(profile, x0)) / r**2)) , tol["ode"])
    fi = first_integral_residual(profile, x0, 1.0 / a**2)
    report.add("first_integral", float(np.max(np.abs(fi) / r**2)), tol["ode"])
    t = time_from_x0(a, c, x0)
    report.add("time_round_trip", float(np.max(np.abs(x0_from_time(a, c, t) - x0))), tol["ode"])
    report.add("cos_cosh_identity", float(np.max(np.abs(np.cos(x0) * np.cosh(c * t / a) - 1.0))), tol["ode"])


def embedding_suite(report: VerificationReport, a: float, points: Sequence[ChartPoint], tol: dict) -> dict:
    upts = [ChartPoint(Chart.MODIFIED_U, p.coords) for p in points]
    hyp = max(hyperboloid_residual(embed(p, a), a) for p in upts)
    met = max(metric_deviation(p, a) for p in upts)
    sec = sectional_curvature_check(a, upts)
    report.add("hyperboloid", hyp, tol["hyperboloid"])
    report.add("induced_metric", met, tol["induced_metric"])
    report.add("sectional_curvature_K", abs(sec.K_estimate - sec.K_expected), tol["sectional"])
    report.add("sectional_curvature_tensor", sec.max_deviation * a * a, tol["sectional"])
    return {"max_hyperboloid_dev": hyp, "max_metric_dev": met, "K_estimate": sec.K_estimate}


def causal_suite(report: VerificationReport, profile: ScaleFactorProfile,
                 points: Sequence[ChartPoint], seed: int, trials: int = 100) -> dict:
    if profile.kind is ProfileKind.SECANT:
        witnesses = cat.timelike_combination_scan(profile, trials, seed)
        worst = max(w.q for w in witnesses)
        report.add("timelike_scan_worst_q", max(worst, 0.0), 0.0)
        return {"scan_trials": trials, "witnesses_found": len(witnesses)}
    if profile.kind is ProfileKind.CONSTANT:
        qs = []
        for p in points:
            _, q = cat.causal_character(cat.FieldId.STATIC0, profile, p)
            qs.append(abs(q - float(eval_R(profile, p.time)) ** 2))
        report.add("static0_norm_equals_R2", max(qs), 1e-12 * profile.a**2)
    return {}


def full_verify(profile: ScaleFactorProfile, seed: int = 42, samples: int = 100,
                tolerances: dict | None = None, config: dict | None = None) -> VerificationReport:
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    report = VerificationReport("full-verify", config or {
        "profile": profile.describe(), "seed": seed, "samples": samples, "tolerances": tol})
    pts = sample_points(Chart.NORTH, samples, seed, profile)
    few = pts[: min(20, samples)]
    curvature_suite(report, profile, pts, tol)
    killing_suite(report, profile, few, tol)
    ricci_identity_suite(report, profile, few[:5], tol)
    summary = compat_suite(report, profile, pts[: min(6, samples)], tol)
    transport_suite(report, profile, pts[: min(10, samples)], tol)
    if profile.kind is ProfileKind.SECANT:
        ode_suite(report, profile, pts, tol)
        summary.update(embedding_suite(report, profile.a, pts, tol))
    summary.update(causal_suite(report, profile, pts, seed))
    report.summary = summary
    return report
