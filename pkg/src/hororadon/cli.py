"""Command-line driver: ``hororadon calibrate | verify | emit-plot``.

Exit codes: 0 when every record passes, 1 when any record fails, 2 for
configuration errors and quadrature tail errors.
"""
from __future__ import annotations

import functools
import math
import os
import sys
import time
from dataclasses import fields

import click
import numpy as np

from . import disk, report, suites
from . import transforms as tr
from .errors import ConfigError, HororadonError, QuadratureUnderresolved, TailToleranceExceeded

CONFIG_ENV_VARS = ("TOOL_CONFIG", "HORORADON_CONFIG")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

_INT_KEYS = {"seed", "grid-beta", "grid-tau", "grid-lambda", "quad-panels", "quad-points", "bumps"}
_FLOAT_KEYS = {"tau-max", "lambda-max", "nbar-truncation"}
_TOL_KEYS = {"tol-" + k for k in suites.DEFAULT_TOLERANCES}
_STR_KEYS = {"out", "format"}
CONFIG_KEYS = _INT_KEYS | _FLOAT_KEYS | _TOL_KEYS | _STR_KEYS


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Flat ``key = value`` lines; '#' starts a comment; keys mirror the CLI flags."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.replace("_", "-").lower()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            if key in _INT_KEYS:
                out[key] = int(value)
            elif key in _FLOAT_KEYS or key in _TOL_KEYS:
                out[key] = float(value)
            else:
                out[key] = value
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {value!r}") from exc
    return out


def load_config_file(path: str | None) -> dict:
    if path is None:
        path = next((os.environ[v] for v in CONFIG_ENV_VARS if os.environ.get(v)), None)
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read(), path)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def build_run_config(values: dict) -> suites.RunConfig:
    """RunConfig from merged file and flag values (flags already override the file)."""
    names = {f.name for f in fields(suites.RunConfig)}
    kwargs = {}
    tols = dict(suites.DEFAULT_TOLERANCES)
    for key, value in values.items():
        if value is None or key in _STR_KEYS:
            continue
        if key in _TOL_KEYS:
            tols[key[4:]] = float(value)
            continue
        attr = key.replace("-", "_")
        if attr in names:
            kwargs[attr] = value
    cfg = suites.RunConfig(tolerances=tols, **kwargs)
    _validate(cfg)
    return cfg


def _validate(cfg: suites.RunConfig) -> None:
    if not 0 <= cfg.seed < 2 ** 64:
        raise ConfigError("seed must be a 64-bit unsigned integer")
    for name in ("grid_beta", "grid_tau", "grid_lambda", "quad_panels", "quad_points", "bumps"):
        if getattr(cfg, name) < 1:
            raise ConfigError(f"{name} must be positive")
    if cfg.grid_beta % 4:
        raise ConfigError("grid-beta must be a multiple of 4")
    if cfg.grid_tau < 16 or cfg.grid_lambda < 16:
        raise ConfigError("grid-tau and grid-lambda need at least 16 nodes")
    for name in ("tau_max", "lambda_max", "nbar_truncation"):
        if not getattr(cfg, name) > 0:
            raise ConfigError(f"{name} must be positive")
    for k, v in cfg.tolerances.items():
        if not (v >= 0 and math.isfinite(v)):
            raise ConfigError(f"tolerance {k} must be a finite non-negative number")
    try:
        cfg.grid()
    except (ValueError, HororadonError) as exc:
        raise ConfigError(str(exc)) from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _err(msg: str) -> None:
    click.echo(msg, err=True)


# --------------------------------------------------------------------------
# calibration


def calibration_records(cfg: suites.RunConfig, refine_kappa: bool = True):
    """(records, calibration or None, exit code) for the measure constants."""
    try:
        cal = suites.calibrate(cfg, with_refinement=refine_kappa)
    except TailToleranceExceeded as exc:
        rec = suites.record("c_N_tail_truncation", "haars", str(exc), 0.0, math.inf, cfg.tol("plancherel"))
        return [rec], None, EXIT_CONFIG
    except QuadratureUnderresolved as exc:
        rec = suites.record("c_N_refinement", "haars", str(exc), 0.0, math.inf, 1e-6)
        return [rec], None, EXIT_FAIL
    recs = [
        suites.record("c_N_refinement", "haars", cal.norm.c_N, cal.norm.c_N, cal.c_N_delta, 1e-6),
        suites.record("c_A_killing_norm", "haars", cal.norm.c_A, cal.norm.c_A, cal.c_A_delta, 1e-6),
        suites.record("kappa_unity", "eq:plancherelformula", cal.norm.kappa, 1.0,
                      abs(cal.norm.kappa - 1.0), cfg.tol("plancherel")),
    ]
    if refine_kappa:
        recs.append(suites.record("kappa_refinement", "eq:plancherelformula", cal.norm.kappa, cal.norm.kappa,
                                  cal.kappa_delta, 1e-6))
    return recs, cal, EXIT_OK


def calibration_stanza(cal: suites.Calibration | None) -> dict:
    if cal is None:
        return {}
    return {
        "constants": cal.constants(),
        "deltas": {"c_A": cal.c_A_delta, "c_N": cal.c_N_delta, "kappa": cal.kappa_delta},
    }


def _exit_code(results: dict, hard: int) -> int:
    if hard == EXIT_CONFIG:
        return EXIT_CONFIG
    ok = all(r.passed for recs in results.values() for r in recs)
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# click plumbing


def _common_options(f):
    opts = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                     help="flat key = value file (default: $TOOL_CONFIG or $HORORADON_CONFIG)"),
        click.option("--seed", type=int, default=None, help="root seed for every suite [20240611]"),
        click.option("--grid-beta", type=int, default=None, help="boundary angles, multiple of 4 [256]"),
        click.option("--grid-tau", type=int, default=None, help="horocycle distance nodes [512]"),
        click.option("--grid-lambda", type=int, default=None, help="spectral nodes, staggered [512]"),
        click.option("--tau-max", type=float, default=None, help="tau window half-width [8]"),
        click.option("--lambda-max", type=float, default=None, help="lambda window half-width [24]"),
        click.option("--quad-panels", type=int, default=None, help="Gauss-Legendre panels [8]"),
        click.option("--quad-points", type=int, default=None, help="points per panel [24]"),
        click.option("--nbar-truncation", type=float, default=None,
                     help="cutoff in y for the c_N integral, s = sinh(y) [40]"),
        click.option("--bumps", type=int, default=None, help="seeded test bumps per suite [5]"),
        click.option("--out", type=click.Path(dir_okay=False), default=None, help="output file (default stdout)"),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None, help="report format [json]"),
    ]
    for key in sorted(suites.DEFAULT_TOLERANCES, reverse=True):
        opts.append(click.option(f"--tol-{key}", f"tol_{key.replace('-', '_')}", type=float, default=None,
                                 help=f"tolerance override [{suites.DEFAULT_TOLERANCES[key]:g}]"))
    for opt in reversed(opts):
        f = opt(f)
    return f


def _resolve(config_path, kwargs) -> tuple[suites.RunConfig, str | None, str]:
    values = load_config_file(config_path)
    for k, v in kwargs.items():
        if v is None:
            continue
        key = "format" if k == "fmt" else k.replace("_", "-")
        values[key] = v
    cfg = build_run_config(values)
    return cfg, values.get("out"), values.get("format", "json")


def _guard(fn):
    """Map configuration errors to exit code 2 and report them on stderr."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            code = fn(*args, **kwargs)
        except ConfigError as exc:
            _err(f"configuration error: {exc}")
            code = EXIT_CONFIG
        sys.exit(code)
    return wrapper


@click.group()
def main():
    """Numerical verification harness for horocyclic Radon and Helgason-Fourier transforms."""


@main.command()
@_common_options
@_guard
def calibrate(config_path, **kwargs):
    """Compute c_N, c_A and kappa with their refinement deltas."""
    cfg, out, fmt = _resolve(config_path, kwargs)
    t0 = time.perf_counter()
    recs, cal, hard = calibration_records(cfg, refine_kappa=True)
    results = {"calibration": recs}
    rep = report.build_report("calibrate", cfg, results, calibration_stanza(cal))
    _emit(report.serialize(rep, fmt), out)
    _err(f"calibration: {sum(r.passed for r in recs)}/{len(recs)} passed ({time.perf_counter() - t0:.1f}s)")
    return _exit_code(results, hard)


@main.command()
@click.argument("suite", type=click.Choice(list(suites.SUITES) + ["all"]))
@_common_options
@_guard
def verify(suite, config_path, **kwargs):
    """Run one verification suite, or all of them."""
    cfg, out, fmt = _resolve(config_path, kwargs)
    t0 = time.perf_counter()
    recs, cal, hard = calibration_records(cfg, refine_kappa=False)
    results = {"calibration": recs}
    diagnostics = {}
    if cal is not None:
        ctx = suites.Context(cfg, cal)
        names = suites.SUITES if suite == "all" else (suite,)
        for name in names:
            t = time.perf_counter()
            try:
                results[name] = suites.run_suite(name, ctx)
            except TailToleranceExceeded as exc:
                results[name] = [suites.record(f"{name}_aborted", "haars", str(exc), 0.0, math.inf, 0.0)]
                hard = EXIT_CONFIG
            except HororadonError as exc:
                results[name] = [suites.record(f"{name}_aborted", "haars", str(exc), 0.0, math.inf, 0.0)]
            n_ok = sum(r.passed for r in results[name])
            _err(f"{name:12s} {n_ok}/{len(results[name])} passed ({time.perf_counter() - t:.1f}s)")
        diagnostics = ctx.diagnostics
    rep = report.build_report(f"verify {suite}", cfg, results, calibration_stanza(cal), diagnostics)
    _emit(report.serialize(rep, fmt), out)
    for row in rep["records"]:
        if not row["passed"]:
            _err(f"FAIL {row['suite']}/{row['name']}: residual {row['residual']} > tolerance {row['tolerance']}")
    _err(f"total {rep['summary']['passed']}/{rep['summary']['total']} passed ({time.perf_counter() - t0:.1f}s)")
    return _exit_code(results, hard)


# --------------------------------------------------------------------------
# plot data


def plot_c_function(cfg):
    lam = np.linspace(0.05, 10.0, 200)
    closed = tr.c_abs_sq_inv(lam)
    gamma = 1.0 / np.abs(tr.c_complex(lam)) ** 2
    cols = {
        "lambda": "spectral parameter",
        "closed_form": "(pi lambda / 2) tanh(pi lambda / 2)",
        "gamma_based": "|c(lambda)|^-2 from the complex Gamma function",
    }
    return cols, zip(lam, closed, gamma), {}


def plot_horocycle_family(cfg):
    taus = np.linspace(-2.0, 2.0, 9)
    rows = []
    for t in taus:
        c = disk.horocycle_params_to_circle(disk.HorocycleParam(disk.BoundaryPoint(0.0), float(t)))
        center = complex(c.center)
        rows.append((t, center.real, center.imag, c.radius, abs(center) + c.radius))
    cols = {
        "tau": "signed distance parameter of the horocycle with normal beta = 0",
        "center_re": "real part of the Euclidean circle center",
        "center_im": "imaginary part of the Euclidean circle center",
        "radius": "Euclidean radius",
        "tangency": "|center| + radius, equal to 1 for a circle tangent to the unit circle",
    }
    return cols, rows, {"beta": 0.0}


def _seeded_bump(cfg):
    ctx = suites.Context(cfg)
    return ctx, ctx.bumps("slice")[0]


def plot_radon_profile(cfg):
    ctx, f = _seeded_bump(cfg)
    tau = ctx.grid.tau.nodes
    vals = tr.radon_values(f, np.zeros_like(tau), tau, ctx.norm, ctx.grid.horocycle_quad)
    cols = {
        "tau": "signed distance parameter at beta = 0",
        "re": "real part of the Radon transform",
        "im": "imaginary part of the Radon transform",
        "abs": "modulus of the Radon transform",
    }
    return cols, zip(tau, vals.real, vals.imag, np.abs(vals)), {"beta": 0.0, "function": f.label}


def plot_spectrum(cfg):
    ctx, f = _seeded_bump(cfg)
    H = tr.helgason_grid(f, ctx.norm, ctx.grid, beta=np.array([0.0]))
    lam = ctx.grid.lam.nodes
    vals = H.samples[0]
    cols = {
        "lambda": "spectral parameter",
        "re": "real part of the Helgason-Fourier transform at beta = 0",
        "im": "imaginary part of the Helgason-Fourier transform at beta = 0",
        "abs": "modulus of the Helgason-Fourier transform",
        "plancherel_density": "Plancherel density |c(lambda)|^-2 / 2",
    }
    return cols, zip(lam, vals.real, vals.imag, np.abs(vals), tr.plancherel_density(lam)), \
        {"beta": 0.0, "function": f.label}


PLOTS = {
    "c-function": plot_c_function,
    "horocycle-family": plot_horocycle_family,
    "radon-profile": plot_radon_profile,
    "spectrum": plot_spectrum,
}


@main.command("emit-plot")
@click.argument("what", type=click.Choice(sorted(PLOTS)))
@_common_options
@_guard
def emit_plot(what, config_path, **kwargs):
    """Write plot data as documented columns (CSV header comments or a JSON columns map)."""
    cfg, out, fmt = _resolve(config_path, kwargs)
    if out is None:
        raise ConfigError("emit-plot needs --out PATH")
    cols, rows, header = PLOTS[what](cfg)
    rows = [tuple(float(x) if isinstance(x, (float, np.floating)) else x for x in r) for r in rows]
    header = {"plot": what, "seed": cfg.seed, **header}
    text = report.table_to_csv(cols, rows, header) if fmt == "csv" else report.table_to_json(cols, rows, header)
    _emit(text, out)
    _err(f"wrote {len(rows)} rows to {out}")
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    main()
