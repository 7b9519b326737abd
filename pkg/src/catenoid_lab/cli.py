"""Command-line front end.

Exit codes: 0 success, 1 failed invariant under ``verify``, 2 bad
configuration, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import asymptotics, boundary_geometry as bg, conditions, robin_spectrum as rs, verification
from .errors import CatenoidLabError, DomainError, NumericalFailure
from .tolerances import Tolerances, use_tolerances

SCHEMA_VERSION = 1
WORKERS_ENV = "CATENOID_LAB_WORKERS"
SWEEP_COLUMNS = ["a", "H", "Hprime", "y", "G_margin", "E_value", "Fprime_value", "ind", "nul"]

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


class ConfigError(CatenoidLabError):
    pass


@dataclass
class RunConfig:
    command: str
    a_values: list = field(default_factory=list)
    k: int | None = None
    parity: str | None = None
    n_max: int = 2
    k_max: int = 3
    fmt: str = "table"
    output: str | None = None
    workers: int = 1
    tolerances: Tolerances = field(default_factory=Tolerances)


# -- grids -------------------------------------------------------------------

def make_grid(lo: float, hi: float, count: int, spacing: str = "linear") -> list[float]:
    if count < 1:
        raise ConfigError("grid count must be at least 1")
    if not lo > 0.5:
        raise ConfigError(f"grid minimum must exceed 1/2, got {lo}")
    if hi < lo:
        raise ConfigError(f"grid maximum {hi} is below minimum {lo}")
    if count == 1:
        return [float(lo)]
    if spacing == "linear":
        pts = np.linspace(lo, hi, count)
    elif spacing == "log-shifted":
        pts = 0.5 + np.logspace(math.log10(lo - 0.5), math.log10(hi - 0.5), count)
    else:
        raise ConfigError(f"unknown spacing {spacing!r}")
    return [float(x) for x in pts]


# -- row builders ------------------------------------------------------------

def geometry_row(a: float) -> dict:
    g = bg.solve_s0(a)
    d = bg.geometry_derivatives(a)
    return {
        "a": g.a, "K": g.K, "s0": g.s0, "phi_s0": g.phi_s0, "r": g.r, "B_s0": g.B_s0,
        "coth_r": g.coth_r, "y": g.y, "H": g.H, "sG": g.sG, "sV": g.sV,
        "r_prime": d.r_prime, "Hprime": d.H_prime, "y_prime": d.y_prime,
        "fbc_residual": g.fbc_residual, "near_degenerate": g.near_degenerate,
    }


def spectrum_rows(a: float, sectors, n_max: int) -> list[dict]:
    rows = []
    for sec in sectors:
        rep = rs.eigenvalues(a, sec, n_max=n_max)
        row = {"a": a, "k": sec.k, "parity": sec.parity}
        for i, mu in enumerate(rep.eigenvalues):
            row[f"mu{i}"] = mu
        row.update({
            "negative_count": rep.negative_count, "shooting_count": rep.shooting_count,
            "n_z": rep.zero_solution_zeros, "delta": rep.boundary_correction,
            "kernel_margin": rep.kernel_margin, "near_kernel": rep.near_kernel,
        })
        rows.append(row)
    return rows


def conditions_row(a: float, k_max: int = 3) -> dict:
    rep = conditions.evaluate_conditions(a)
    table = conditions.index_nullity(a, k_max)
    h = rep.hardy
    return {
        "a": rep.a, "H": rep.H, "Hprime": rep.Hprime, "y": rep.y, "G_margin": rep.G_margin,
        "E_value": rep.E_value, "Fprime_value": rep.Fprime_value,
        "ind": table.ind_total, "nul": table.nul_total,
        "G_margin_alt": rep.G_margin_alt, "phi_s0": rep.phi_s0, "phi_positive": rep.phi_positive,
        "consistent": rep.consistent, "mode0_kernel_margin": rep.mode0_kernel_margin,
        "hardy_sV": h.sV, "hardy_I_V": h.I_V, "hardy_K_star": h.K_star,
        "hardy_I_V_plus": h.I_V_plus, "hardy_K_star_plus": h.K_star_plus,
        "hardy_cond1": h.cond1, "hardy_cond2": h.cond2,
        "nul_max": table.nul_range[1], "truncation_margin": table.truncation_margin,
        "status": table.status, "flags": "; ".join(table.flags),
    }


def asymptotics_rows() -> list[dict]:
    c = asymptotics.compute_constants()
    rows = []
    for name in ("sigma_star", "rho_star", "c_star", "s_val", "C0", "xi1", "I_star", "d_inf", "gamma_quarter"):
        rows.append({"name": name, "value": getattr(c, name), "formula": c.formulas[name]})
    return rows


def _with_tol(fn, tol, *args):
    with use_tolerances(tol):
        return fn(*args)


def _map_rows(fn, a_values, cfg: RunConfig, *extra) -> list:
    if cfg.workers > 1 and len(a_values) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_with_tol, fn, cfg.tolerances, a, *extra) for a in a_values]
            return [f.result() for f in futures]
    return [_with_tol(fn, cfg.tolerances, a, *extra) for a in a_values]


# -- output ------------------------------------------------------------------

def _plain(value):
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def _fmt_cell(value) -> str:
    value = _plain(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(command: str, rows: list[dict], fmt: str, columns: list[str] | None = None) -> str:
    rows = [{k: _plain(v) for k, v in row.items()} for row in rows]
    if columns is None:
        columns = []
        for row in rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
    if fmt == "json":
        payload = {"schema": SCHEMA_VERSION, "command": command, "version": __version__, "rows": rows}
        return json.dumps(payload, indent=2, allow_nan=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt_cell(row.get(c, "")) for c in columns])
        return buf.getvalue()
    cells = [[_table_cell(row.get(c, "")) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


def _table_cell(value) -> str:
    value = _plain(value)
    if isinstance(value, float) and not isinstance(value, bool):
        return f"{value:.10g}"
    return _fmt_cell(value)


# -- argument parsing --------------------------------------------------------

def _positive(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=["json", "csv", "table"], default="table")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--quad-tol", type=_positive, help="relative quadrature tolerance")
    common.add_argument("--ode-tol", type=_positive, help="relative ODE tolerance")
    common.add_argument("--root-tol", type=_positive, help="absolute root tolerance")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--a", type=float, nargs="+", help="explicit parameter values")
    grid.add_argument("--min", dest="a_min", type=float)
    grid.add_argument("--max", dest="a_max", type=float)
    grid.add_argument("--count", type=int)
    grid.add_argument("--spacing", choices=["linear", "log-shifted"], default="linear")
    grid.add_argument("--workers", type=int, help=f"parallel workers (default: ${WORKERS_ENV} or 1)")

    parser = argparse.ArgumentParser(prog="catenoid-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("geometry", parents=[common, grid], help="s0, r, H, y and derivatives")
    sp = sub.add_parser("spectrum", parents=[common, grid], help="Robin eigenvalues per sector")
    sp.add_argument("--k", type=int, help="Fourier mode (default: all modes up to --k-max)")
    sp.add_argument("--parity", choices=list(rs.PARITIES))
    sp.add_argument("--n-max", type=int, default=2)
    sp.add_argument("--k-max", type=int, default=3)
    cp = sub.add_parser("conditions", parents=[common, grid], help="condition report and index table")
    cp.add_argument("--k-max", type=int, default=3)
    sub.add_parser("asymptotics", parents=[common], help="limiting constants")
    sw = sub.add_parser("sweep", parents=[common, grid], help="one condition row per grid point")
    sw.add_argument("--k-max", type=int, default=3)
    sub.add_parser("verify", parents=[common, grid], help="run the invariant suite")
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command, fmt=args.fmt, output=args.output)
    overrides = {}
    if args.quad_tol:
        overrides["quad_rel"] = args.quad_tol
    if args.ode_tol:
        overrides["ode_rel"] = args.ode_tol
    if args.root_tol:
        overrides["root"] = args.root_tol
    cfg.tolerances = Tolerances(**overrides)
    if args.command == "asymptotics":
        return cfg
    grid_given = any(v is not None for v in (args.a_min, args.a_max, args.count))
    if args.a and grid_given:
        raise ConfigError("give either --a or --min/--max/--count, not both")
    if args.a:
        for a in args.a:
            if not a > 0.5 or not math.isfinite(a):
                raise ConfigError(f"a must be a finite number > 1/2, got {a}")
        cfg.a_values = sorted(set(args.a))
    elif grid_given:
        if args.a_min is None or args.count is None:
            raise ConfigError("grid needs --min and --count (and --max when count > 1)")
        a_max = args.a_max if args.a_max is not None else args.a_min
        cfg.a_values = make_grid(args.a_min, a_max, args.count, args.spacing)
    elif args.command == "verify":
        cfg.a_values = [1.0]
    else:
        raise ConfigError(f"{args.command} needs --a or a grid (--min/--max/--count)")
    workers = args.workers
    if workers is None:
        env = os.environ.get(WORKERS_ENV)
        try:
            workers = int(env) if env else 1
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {env!r}")
    if workers < 1:
        raise ConfigError("worker count must be at least 1")
    cfg.workers = workers
    if args.command in ("spectrum", "conditions", "sweep"):
        cfg.k_max = args.k_max
        if cfg.k_max < 2:
            raise ConfigError("--k-max must be at least 2")
    if args.command == "spectrum":
        cfg.k, cfg.parity, cfg.n_max = args.k, args.parity, args.n_max
        if cfg.k is not None and cfg.k < 0:
            raise ConfigError("--k must be non-negative")
        if not 0 <= cfg.n_max <= rs.MAX_EIGEN_INDEX:
            raise ConfigError(f"--n-max must lie in [0, {rs.MAX_EIGEN_INDEX}]")
    return cfg


# -- execution ---------------------------------------------------------------

def execute(cfg: RunConfig) -> tuple[int, str]:
    cmd = cfg.command
    if cmd == "asymptotics":
        with use_tolerances(cfg.tolerances):
            return EXIT_OK, render(cmd, asymptotics_rows(), cfg.fmt)
    if cmd == "geometry":
        return EXIT_OK, render(cmd, _map_rows(geometry_row, cfg.a_values, cfg), cfg.fmt)
    if cmd == "spectrum":
        ks = [cfg.k] if cfg.k is not None else list(range(cfg.k_max + 1))
        pars = [cfg.parity] if cfg.parity else list(rs.PARITIES)
        sectors = [rs.ModeSector(k, par) for k in ks for par in pars]
        nested = _map_rows(spectrum_rows, cfg.a_values, cfg, sectors, cfg.n_max)
        return EXIT_OK, render(cmd, [r for rows in nested for r in rows], cfg.fmt)
    if cmd in ("conditions", "sweep"):
        rows = _map_rows(conditions_row, cfg.a_values, cfg, cfg.k_max)
        # plot-ready columns first, then every remaining report field
        columns = None
        if cmd == "sweep" and rows:
            columns = SWEEP_COLUMNS + [c for c in rows[0] if c not in SWEEP_COLUMNS]
        return EXIT_OK, render(cmd, rows, cfg.fmt, columns)
    if cmd == "verify":
        with use_tolerances(cfg.tolerances):
            checks = verification.constant_checks()
        for rows in _map_rows(verification.point_checks, cfg.a_values, cfg):
            checks += rows
        rows = [{"a": c.a if c.a is not None else "", "check": c.name, "kind": c.kind,
                 "value": c.value, "threshold": c.threshold, "passed": c.passed} for c in checks]
        failed = [c for c in checks if c.kind == "invariant" and not c.passed]
        return (EXIT_INVARIANT if failed else EXIT_OK), render(cmd, rows, cfg.fmt)
    raise ConfigError(f"unknown command {cmd!r}")


def run(config: RunConfig) -> int:
    """Execute a validated config, writing the report; returns the exit status."""
    try:
        status, text = execute(config)
    except (ConfigError, DomainError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"numerical failure in {exc.stage}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
