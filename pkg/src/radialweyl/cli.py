"""Command-line front end: ``radialweyl <command> [--config FILE] [flags]``.

Exit codes: 0 success, 2 config error, 3 numeric failure, 4 inequality or
check violation, 5 hypotheses not met.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

from .identities import IDENTITIES, run_identities
from .oracle import OracleTruncationError, oracle_report
from .quadrature import QuadratureError
from .spectral import (
    DEFAULT_ABS_TOL,
    DEFAULT_REL_TOL,
    FLAG_HYPOTHESES,
    DegenerateFitError,
    bound_expansion,
    verify_theorem,
)
from .symbols import builtin_profile

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_VIOLATION = 4
EXIT_HYPOTHESES = 5

SPECTRUM_COLUMNS = ["d", "h", "alpha_order", "lambda", "bound", "margin", "flags"]
ORACLE_COLUMNS = [
    "kind", "d", "h", "alpha", "beta", "oracle_real", "oracle_imag",
    "closed_form", "delta", "error_estimate", "note",
]
ASYMPTOTIC_COLUMNS = ["h", "bound", "remainder", "series_bound"]
IDENTITY_COLUMNS = ["identity", "max_error", "tolerance", "worst_case", "status"]


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    profile: str = "one_minus_exp"
    params: list[float] = field(default_factory=list)
    d: int = 1
    h_grid: list[float] = field(default_factory=lambda: [1.0, 0.5, 0.1, 0.01])
    alpha_max: int = 10
    rel_tol: float = DEFAULT_REL_TOL
    abs_tol: float = DEFAULT_ABS_TOL
    oracle_enabled: bool = True
    oracle_orders: int = 4
    grid: int | None = None
    diagonal_tol: float = 1e-6
    off_diagonal_tol: float = 1e-8
    translation_tol: float = 1e-6
    translations: list[list[float]] = field(default_factory=lambda: [[1.0, 0.0], [0.0, 0.5], [0.7, -0.3]])
    format: str = "csv"
    out: str | None = None
    only: list[str] = field(default_factory=list)

    def validate(self):
        if self.d < 1:
            raise ConfigError("d must be >= 1")
        if self.alpha_max < 0:
            raise ConfigError("alpha_max must be >= 0")
        if not self.h_grid or any(not h > 0 for h in self.h_grid):
            raise ConfigError("h_grid entries must be positive")
        for name in ("rel_tol", "abs_tol", "diagonal_tol", "off_diagonal_tol", "translation_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.oracle_orders < 0:
            raise ConfigError("oracle_orders must be >= 0")
        if self.grid is not None and self.grid < 2:
            raise ConfigError("grid must be >= 2")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if any(len(t) != 2 for t in self.translations):
            raise ConfigError("translations are [x0, xi0] pairs")
        return self


def _from_file(path) -> dict:
    """Flatten the nested JSON config into RunConfig field names."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    flat = {}
    prof = raw.pop("profile", None)
    if isinstance(prof, str):
        flat["profile"] = prof
    elif isinstance(prof, dict):
        flat["profile"] = prof.get("name", RunConfig.profile)
        flat["params"] = prof.get("params", [])
    for section, mapping in (
        ("tolerances", {"rel_tol": "rel_tol", "abs_tol": "abs_tol"}),
        ("oracle", {"enabled": "oracle_enabled", "orders": "oracle_orders", "grid": "grid",
                    "diagonal_tol": "diagonal_tol", "off_diagonal_tol": "off_diagonal_tol",
                    "translation_tol": "translation_tol", "translations": "translations"}),
        ("output", {"format": "format", "path": "out"}),
    ):
        sub = raw.pop(section, {}) or {}
        for key, value in sub.items():
            if key not in mapping:
                raise ConfigError(f"unknown key {section}.{key}")
            flat[mapping[key]] = value
    known = set(RunConfig.__dataclass_fields__)
    for key, value in raw.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        flat[key] = value
    return flat


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_config(args) -> RunConfig:
    values = _from_file(args.config) if args.config else {}
    overrides = {
        "profile": args.profile, "params": args.params, "d": args.d, "h_grid": args.h,
        "alpha_max": args.alpha_max, "format": args.format, "out": args.out,
        "rel_tol": args.rel_tol, "abs_tol": args.abs_tol,
        "oracle_orders": args.oracle_orders, "grid": args.grid,
        "only": args.only,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        cfg = RunConfig(**values)
        cfg.d = int(cfg.d)
        cfg.alpha_max = int(cfg.alpha_max)
        cfg.oracle_orders = int(cfg.oracle_orders)
        cfg.h_grid = [float(h) for h in cfg.h_grid]
        cfg.params = [float(p) for p in cfg.params]
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()


def _num(x) -> str:
    return format(float(x), ".17g")


def _emit(cfg: RunConfig, columns, rows, extra=None):
    """Write rows as CSV (floats at 17 significant digits) or JSON."""
    if cfg.format == "json":
        payload = {"columns": columns, "rows": rows}
        if extra:
            payload.update(extra)
        text = json.dumps(payload, indent=2, allow_nan=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_num(row[c]) if isinstance(row[c], float) else row[c] for c in columns])
        text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _profile(cfg):
    try:
        return builtin_profile(cfg.profile, cfg.params)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _spectral_rows(tables):
    rows = []
    for tab in tables:
        for n, lam in tab.entries.items():
            rows.append({
                "d": tab.symbol.d, "h": float(tab.symbol.h), "alpha_order": n,
                "lambda": float(lam), "bound": float(tab.bound), "margin": float(lam - tab.bound),
                "flags": ";".join(tab.flags),
            })
    return rows


def cmd_spectrum(cfg: RunConfig) -> int:
    profile = _profile(cfg)
    tables = verify_theorem(profile, cfg.d, cfg.h_grid, cfg.alpha_max, cfg.rel_tol, cfg.abs_tol)
    _emit(cfg, SPECTRUM_COLUMNS, _spectral_rows(tables))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    profile = _profile(cfg)
    tables = verify_theorem(profile, cfg.d, cfg.h_grid, cfg.alpha_max, cfg.rel_tol, cfg.abs_tol)
    worst = min(tables, key=lambda t: t.min_margin)
    _emit(cfg, SPECTRUM_COLUMNS, _spectral_rows(tables), {
        "summary": {"min_margin": worst.min_margin, "h": worst.symbol.h, "alpha_order": worst.argmin_order,
                    "hypotheses_met": profile.nondecreasing, "bounded": profile.bounded},
    })
    if not profile.nondecreasing:
        status, code = FLAG_HYPOTHESES, EXIT_HYPOTHESES
    elif worst.min_margin < -cfg.abs_tol:
        status, code = "FAIL", EXIT_VIOLATION
    else:
        status, code = "PASS", EXIT_OK
    scope = "" if profile.bounded else " (extended domain: unbounded profile)"
    print(f"{status}: {profile.label} d={cfg.d} min margin {worst.min_margin:.3e} "
          f"at h={worst.symbol.h:g}, order={worst.argmin_order}{scope}", file=sys.stderr)
    return code


def cmd_check_identities(cfg: RunConfig) -> int:
    try:
        results = run_identities(cfg.only or None)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rows = [{"identity": r.name, "max_error": float(r.max_error), "tolerance": float(r.tolerance),
             "worst_case": r.worst_case, "status": "pass" if r.passed else "FAIL"} for r in results]
    _emit(cfg, IDENTITY_COLUMNS, rows)
    failing = [r for r in results if not r.passed]
    for r in failing:
        print(f"FAIL {r.name}: error {r.max_error:.3e} > {r.tolerance:.1e} at {r.worst_case}", file=sys.stderr)
    return EXIT_VIOLATION if failing else EXIT_OK


def cmd_oracle_compare(cfg: RunConfig) -> int:
    if cfg.d > 2:
        raise ConfigError("oracle-compare supports d <= 2")
    profile = _profile(cfg)
    h = cfg.h_grid[0]
    report = oracle_report(
        profile, cfg.d, h, cfg.oracle_orders, cfg.grid,
        translations=[tuple(t) for t in cfg.translations] if cfg.d == 1 else (),
        rel_tol=cfg.rel_tol,
    )
    rows = []
    for p in report.pairs:
        rows.append({
            "kind": "diagonal" if p.alpha == p.beta else "off_diagonal", "d": cfg.d, "h": float(h),
            "alpha": str(p.alpha), "beta": str(p.beta),
            "oracle_real": float(p.value.real), "oracle_imag": float(p.value.imag),
            "closed_form": float(p.closed_form), "delta": float(p.delta),
            "error_estimate": float(p.error_estimate), "note": p.error or "",
        })
    for t in report.translations:
        rows.append({
            "kind": "translation", "d": cfg.d, "h": float(h),
            "alpha": str(t.f_index), "beta": str(t.g_index),
            "oracle_real": float(t.rhs.real), "oracle_imag": float(t.rhs.imag),
            "closed_form": float(t.lhs.real), "delta": float(t.delta), "error_estimate": 0.0,
            "note": f"x0={t.x0[0]:g} xi0={t.xi0[0]:g} lhs_imag={t.lhs.imag:.17g}",
        })
    summary = {
        "max_diagonal_delta": report.max_diagonal_delta,
        "max_off_diagonal": report.max_off_diagonal,
        "max_translation_delta": report.max_translation_delta,
    }
    _emit(cfg, ORACLE_COLUMNS, rows, {"summary": summary})
    print("oracle: " + ", ".join(f"{k}={v:.3e}" for k, v in summary.items()), file=sys.stderr)
    if any(p.error for p in report.pairs):
        return EXIT_NUMERIC
    ok = (report.max_diagonal_delta <= cfg.diagonal_tol
          and report.max_off_diagonal <= cfg.off_diagonal_tol
          and report.max_translation_delta <= cfg.translation_tol)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_asymptotics(cfg: RunConfig) -> int:
    profile = _profile(cfg)
    try:
        exp = bound_expansion(profile, cfg.h_grid, cfg.rel_tol)
    except DegenerateFitError as exc:
        print(f"fit failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    rows = []
    for i, h in enumerate(exp.h_values):
        series = exp.series_values[i] if exp.series_values is not None else math.nan
        rows.append({"h": float(h), "bound": float(exp.bound_values[i]),
                     "remainder": float(exp.remainders[i]), "series_bound": float(series)})
    summary = {k: v for k, v in asdict(exp).items() if k not in ("h_values", "bound_values", "remainders",
                                                                    "series_values")}
    _emit(cfg, ASYMPTOTIC_COLUMNS, rows, {"summary": summary})
    if exp.flat:
        print(f"{profile.label}: B(h) - Phi(0) vanishes on the grid; expansion is constant", file=sys.stderr)
    else:
        print(f"{profile.label}: fitted order {exp.fitted_order:.4f} (declared {exp.predicted_order}), "
              f"leading coefficient {exp.leading_coefficient} (Phi^(m)(0) = {exp.expected_coefficient})",
              file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "check-identities": cmd_check_identities,
    "oracle-compare": cmd_oracle_compare,
    "asymptotics": cmd_asymptotics,
}


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--profile", help="builtin profile name")
    common.add_argument("--params", type=_float_list, help="profile parameters, comma separated")
    common.add_argument("--d", type=int, help="dimension")
    common.add_argument("--h", type=_float_list, help="semiclassical parameters, comma separated")
    common.add_argument("--alpha-max", dest="alpha_max", type=int)
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--rel-tol", dest="rel_tol", type=float)
    common.add_argument("--abs-tol", dest="abs_tol", type=float)
    common.add_argument("--oracle-orders", dest="oracle_orders", type=int)
    common.add_argument("--grid", type=int)
    common.add_argument("--only", action="append", choices=sorted(IDENTITIES),
                        help="restrict check-identities to this identity (repeatable)")
    parser = argparse.ArgumentParser(prog="radialweyl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, OracleTruncationError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
