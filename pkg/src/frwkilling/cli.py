"""Command-line front end: ``frwkilling <subcommand> [options]``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage
or configuration errors.  Reports go to ``--output`` (or stdout) as JSON or
CSV; the wall time is printed to stderr and never written into a report.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import catalog as cat
from .curvature import (
    antisymmetry_residual,
    first_bianchi_residual,
    christoffel_numeric,
    count_nonzero_christoffel,
    nabla_riemann_numeric,
    relative_error,
    riemann_numeric,
    connection,
    nabla_riemann_tensor,
    ricci,
    riemann_tensor,
    scalar_curvature,
)
from .errors import (
    ChartProfileMismatch,
    ConfigError,
    DomainError,
    FrwKillingError,
    SingularPointError,
)
from .geometry import Chart, ChartPoint, parse_point
from .killing import algebra_analysis, compat_rank, transport_jet
from .report import VerificationReport
from .sampling import sample_points
from .scale_factor import ScaleFactorProfile, parse_profile
from .verify import (
    DEFAULT_TOLERANCES,
    embedding_suite,
    full_verify,
    max_killing_residual,
)

USAGE_ERRORS = (ConfigError, DomainError, ChartProfileMismatch, SingularPointError)
CONFIG_KEYS = {"profile", "seed", "samples", "output", "format", "point", "a", "field"}
SEED_ENV = "KL_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, profile: bool = True) -> None:
    if profile:
        p.add_argument("--profile", help="scale factor, e.g. secant:1, exponential:1,1, table:knots.csv")
    p.add_argument("--seed", type=int, default=None, help="master seed (default 42, or $KL_SEED)")
    p.add_argument("--samples", type=int, default=None, help="number of sample points (default 100)")
    p.add_argument("--output", help="report path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--config", help="key=value file overriding defaults")
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                   help="override a tolerance; repeatable")


def _point_args(p: argparse.ArgumentParser, help_text: str = "point such as x:0,0.5,0,0 or u:0,0,0,0") -> None:
    p.add_argument("--point", default=None, help=help_text)
    p.add_argument("--chart", default=None, help="chart for --coords: north, south or u")
    p.add_argument("--coords", default=None, help="comma-separated coordinates, e.g. 0.2,1,0,0")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="frwkilling", description="Verify Killing fields of the closed FRW universe.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("curvature-report", help="curvature at a point, closed form vs numeric")
    _common(p)
    _point_args(p)

    p = sub.add_parser("killing-check", help="Killing residual of a catalog field")
    _common(p)
    p.add_argument("--field", default=None)

    p = sub.add_parser("compat-rank", help="rank of the compatibility operator at a point")
    _common(p)
    _point_args(p)

    p = sub.add_parser("algebra-dim", help="dimension of the Killing algebra")
    _common(p)

    p = sub.add_parser("transport", help="transport origin data of a field to a point")
    _common(p)
    p.add_argument("--field", default=None)
    _point_args(p, "end point (north chart)")
    p.add_argument("--via", action="append", default=[], help="way point; repeatable")

    p = sub.add_parser("catalog", help="list or evaluate catalog fields")
    _common(p)
    p.add_argument("--list", action="store_true")
    p.add_argument("--eval", dest="field", default=None)
    _point_args(p)

    p = sub.add_parser("embed-check", help="hyperboloid embedding checks")
    _common(p, profile=False)
    p.add_argument("--a", type=float, default=None)

    p = sub.add_parser("full-verify", help="run every check for a profile")
    _common(p)
    return parser


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def read_config(path: str) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment; ``tol.NAME`` sets tolerances."""
    out: dict = {"tol": {}}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not sep:
            raise ConfigError(f"{path}:{n}: expected key=value")
        if key.startswith("tol."):
            out["tol"][key[4:]] = val
        elif key in CONFIG_KEYS:
            out[key] = val
        else:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
    return out


def _tolerances(pairs, base: dict) -> dict:
    tol = dict(DEFAULT_TOLERANCES)
    items = list(base.items()) + [tuple(s.split("=", 1)) if "=" in s else (s, None) for s in pairs]
    for name, val in items:
        if val is None:
            raise ConfigError(f"tolerance override {name!r} needs NAME=VALUE")
        if name not in DEFAULT_TOLERANCES:
            raise ConfigError(f"unknown tolerance {name!r}")
        try:
            tol[name] = float(val)
        except ValueError as exc:
            raise ConfigError(f"bad tolerance value {val!r}") from exc
    return tol


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file, environment and flags (flags win)."""
    cfg = read_config(args.config) if args.config else {"tol": {}}
    base_dir = Path(args.config).parent if args.config else Path.cwd()

    def pick(name, default=None):
        val = getattr(args, name, None)
        if val is not None and val != []:
            return val
        return cfg.get(name, default)

    seed = args.seed
    if seed is None:
        env = os.environ.get(SEED_ENV)
        seed = env if env is not None else cfg.get("seed", 42)
    try:
        seed = int(seed)
        samples = int(pick("samples", 100))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if samples < 1:
        raise ConfigError("--samples must be at least 1")
    point = pick("point")
    coords = getattr(args, "coords", None)
    if coords is not None:
        if point is not None:
            raise ConfigError("give either --point or --coords, not both")
        point = f"{getattr(args, 'chart', None) or 'north'}:{coords}"
    profile_text = pick("profile")
    return {
        "profile_text": profile_text,
        "profile": parse_profile(profile_text, base_dir) if profile_text else None,
        "seed": seed,
        "samples": samples,
        "output": pick("output"),
        "format": pick("format", "json"),
        "point": point,
        "field": pick("field"),
        "a": pick("a"),
        "tol": _tolerances(args.tol, cfg["tol"]),
    }


def _need_profile(r: dict) -> ScaleFactorProfile:
    if r["profile"] is None:
        raise ConfigError("--profile is required")
    return r["profile"]


def _point(r: dict, profile: ScaleFactorProfile | None, default: str | None = None) -> ChartPoint:
    text = r["point"] or default
    if text is None:
        raise ConfigError("--point is required")
    p = parse_point(text)
    if profile is not None and p.chart.stereographic:
        profile.check_domain(p.time)
    return p


def _config_echo(command: str, r: dict) -> dict:
    echo = {"command": command, "profile": r["profile"].describe() if r["profile"] else None,
            "seed": r["seed"], "samples": r["samples"]}
    if r["point"]:
        echo["point"] = r["point"]
    if r["field"]:
        echo["field"] = r["field"]
    echo["tolerances"] = r["tol"]
    return echo


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_curvature_report(r: dict) -> VerificationReport:
    profile = _need_profile(r)
    p = _point(r, profile, "x:0,0,0,0")
    rep = VerificationReport("curvature-report", _config_echo("curvature-report", r))
    gamma = connection(profile, p)
    R = riemann_tensor(profile, p)
    nonzero = [{"idx": [int(k), int(i), int(j)], "value": float(gamma[k, i, j])}
               for k, i, j in zip(*np.nonzero(np.abs(gamma) > 1e-14))]
    identity = max(antisymmetry_residual(R), first_bianchi_residual(R))
    rep.summary = {
        "point": {"chart": p.chart.value, "coords": list(p.coords)},
        "profile": profile.describe(),
        "gamma_nonzero": nonzero,
        "gamma_counts": count_nonzero_christoffel(gamma),
        "ricci_diag": np.diagonal(ricci(profile, p)).tolist(),
        "scalar": scalar_curvature(profile, p),
        "max_identity_residual": identity,
    }
    rep.add("riemann_identities", identity, r["tol"]["identity"])
    if p.chart.stereographic:
        tol = r["tol"]
        rep.add("christoffel_closed_vs_numeric", relative_error(gamma, christoffel_numeric(profile, p).gamma),
                tol["gamma"])
        rep.add("riemann_closed_vs_numeric", relative_error(R, riemann_numeric(profile, p).riemann), tol["riemann"])
        rep.add("nabla_riemann_closed_vs_numeric",
                relative_error(nabla_riemann_tensor(profile, p), nabla_riemann_numeric(profile, p).nabla_riemann),
                tol["nabla_riemann"])
    return rep


def cmd_killing_check(r: dict) -> VerificationReport:
    profile = _need_profile(r)
    if not r["field"]:
        raise ConfigError("--field is required")
    fid = _field(r["field"])
    rep = VerificationReport("killing-check", _config_echo("killing-check", r))
    pts = sample_points(Chart.NORTH, r["samples"], r["seed"], profile)
    res = max_killing_residual(fid, profile, pts)
    rep.add(f"killing_{fid.value}", res, r["tol"]["killing"])
    rep.summary = {"field": fid.value, "max_residual": res,
                   "verdict": "Killing" if res <= r["tol"]["killing"] else "not Killing"}
    return rep


def cmd_compat_rank(r: dict) -> VerificationReport:
    profile = _need_profile(r)
    p = _point(r, profile) if r["point"] else None
    rep = VerificationReport("compat-rank", _config_echo("compat-rank", r))
    cr = compat_rank(profile, p)
    rep.add("rank_gap_inverse", 1.0 / cr.gap, 1.0 / r["tol"]["rank_gap"])
    d = cr.to_dict()
    rep.summary = d
    return rep


def cmd_algebra_dim(r: dict) -> VerificationReport:
    profile = _need_profile(r)
    rep = VerificationReport("algebra-dim", _config_echo("algebra-dim", r))
    lo, hi = profile.safe_interval()
    base = ChartPoint(Chart.NORTH, (0.5 * (lo + hi), 0.0, 0.0, 0.0))
    pts = sample_points(Chart.NORTH, min(r["samples"], 8), r["seed"], profile)
    alg = algebra_analysis(profile, [base, *pts])
    rep.add("rank_gap_inverse", 1.0 / alg.gap, 1.0 / r["tol"]["rank_gap"])
    rep.summary = {"algebra_dimension": alg.dimension, "singular_values": alg.singular_values.tolist(),
                   "pointwise_kernel_dims": alg.pointwise_kernel_dims}
    return rep


def _field(text: str) -> cat.FieldId:
    try:
        return cat.FieldId.parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_transport(r: dict) -> VerificationReport:
    profile = _need_profile(r)
    fid = _field(r["field"] or "Mer1")
    end = _point(r, profile)
    if end.chart is not Chart.NORTH:
        raise ConfigError("transport end point must be a north-chart point")
    lo, hi = profile.safe_interval()
    start = ChartPoint(Chart.NORTH, (0.5 * (lo + hi), 0.0, 0.0, 0.0))
    via = [parse_point(v) for v in r.get("via", [])]
    jet0 = cat.origin_initial_data(fid, profile, start.time)
    jet = transport_jet(profile, start, jet0, [*via, end])
    ref = cat.field_covector(fid, profile, end)
    rep = VerificationReport("transport", _config_echo("transport", r))
    rep.add("transport_closure", relative_error(np.array(jet.X), ref), r["tol"]["transport"])
    rep.summary = {"field": fid.value, "start": list(start.coords), "end": list(end.coords),
                   "jet": jet.as_dict(), "catalog_covector": ref.tolist()}
    return rep


def cmd_catalog(r: dict, list_only: bool) -> VerificationReport:
    rep = VerificationReport("catalog", _config_echo("catalog", r))
    if list_only or not r["field"]:
        rep.summary = {"fields": [{"id": f.id.value, "chart": f.chart_of_definition.value,
                                   "validity": f.validity} for f in cat.CATALOG.values()]}
        return rep
    profile = _need_profile(r)
    fid = _field(r["field"])
    p = _point(r, profile)
    vec = cat.field_vector(fid, profile, p)
    label, q = cat.causal_character(fid, profile, p) if np.any(vec) else (cat.CausalCharacter.NULL, 0.0)
    rep.summary = {"field": fid.value, "chart": p.chart.value, "point": list(p.coords),
                   "vector": vec.tolist(), "covector": cat.field_covector(fid, profile, p).tolist(),
                   "norm_squared": q, "causal_character": label.value}
    return rep


def cmd_embed_check(r: dict) -> VerificationReport:
    a = float(r["a"]) if r["a"] is not None else (r["profile"].a if r["profile"] else 1.0)
    if a <= 0:
        raise ConfigError("--a must be positive")
    rep = VerificationReport("embed-check", _config_echo("embed-check", r) | {"a": a})
    pts = sample_points(Chart.MODIFIED_U, r["samples"], r["seed"])
    rep.summary = embedding_suite(rep, a, pts, r["tol"])
    return rep


def dispatch(args: argparse.Namespace) -> tuple[VerificationReport, dict]:
    r = resolve(args)
    return _run_command(args, r), r


def _run_command(args: argparse.Namespace, r: dict) -> VerificationReport:
    r["via"] = getattr(args, "via", [])
    cmd = args.command
    if cmd == "curvature-report":
        return cmd_curvature_report(r)
    if cmd == "killing-check":
        return cmd_killing_check(r)
    if cmd == "compat-rank":
        return cmd_compat_rank(r)
    if cmd == "algebra-dim":
        return cmd_algebra_dim(r)
    if cmd == "transport":
        return cmd_transport(r)
    if cmd == "catalog":
        return cmd_catalog(r, args.list)
    if cmd == "embed-check":
        return cmd_embed_check(r)
    profile = _need_profile(r)
    return full_verify(profile, r["seed"], r["samples"], r["tol"], _config_echo("full-verify", r))


def _emit(report: VerificationReport, r_format: str, output: str | None) -> None:
    text = report.to_csv() if r_format == "csv" else report.to_json()
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    started = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        report, r = dispatch(args)
        _emit(report, r["format"], r["output"])
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"frwkilling: error: {exc}", file=sys.stderr)
        return 2
    except USAGE_ERRORS as exc:
        print(f"frwkilling: error: {exc}", file=sys.stderr)
        return 2
    except FrwKillingError as exc:
        print(f"frwkilling: check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(f"wall time: {time.perf_counter() - started:.3f} s", file=sys.stderr)
    return 0 if report.passed else 1


def main() -> None:
    sys.exit(run())
