"""Command-line front end: ``bvflow <command> --config FILE``.

Exit codes: 0 ok, 1 verification failure, 2 configuration error,
3 numerical failure. Outputs are CSV (17 significant digits) plus a JSON
summary that echoes the resolved configuration, and never contain
timestamps, so equal inputs give equal bytes.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import math
import sys
import warnings
from pathlib import Path

import click
import numpy as np

from . import parallel
from .config import load_config, shipped_config
from .derivative import _single_paths, finite_difference, local_time_derivatives, smooth_derivative
from .errors import (
    BVFlowError,
    ConfigError,
    NoStationaryRegime,
)
from .flow import TimeGrid, make_noise, make_noise_batch, simulate_flow
from .local_time import default_bandwidth, default_levels, occupation_profile, tanaka_profile
from .lyapunov import default_floor, empirical_lyapunov, seed_list
from .stationary import derivative_growth_rate, lyapunov_formula, stationary_density

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
QUICK_T, QUICK_SEEDS = 50.0, 5


def _fmt(v):
    if isinstance(v, str):
        return v
    return "%.17g" % v


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    Path(path).write_text(buf.getvalue())


def write_json(path, payload):
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _outdir(out):
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def guarded(fn):
    """Map toolkit errors onto exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ConfigError, NoStationaryRegime) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        except (BVFlowError, FloatingPointError) as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            sys.exit(EXIT_NUMERIC)

    return wrapper


def _load(config, seed):
    cfg = load_config(config)
    return cfg.with_overrides(seed=seed) if seed is not None else cfg


def _common(fn):
    fn = click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True,
                      help="Worker threads; never changes the output.")(fn)
    fn = click.option("--out", type=click.Path(file_okay=False), default=".", show_default=True,
                      help="Output directory.")(fn)
    fn = click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None,
                      help="Root seed, overriding run.seed.")(fn)
    fn = click.option("--config", "config", type=click.Path(dir_okay=False), required=True,
                      help="Experiment file (.cfg or .json).")(fn)
    return fn


@click.group()
def main():
    """Simulate stochastic flows with bounded-variation drift and check their theory."""


@main.command()
@_common
@guarded
def simulate(config, seed, out, threads):
    """Euler-Maruyama trajectory of every initial point on one noise path."""
    cfg = _load(config, seed)
    grid = TimeGrid(cfg.T, cfg.dt)
    noise = make_noise(grid, cfg.seed, 0)
    traj = simulate_flow(cfg.drift, cfg.initial_points, grid, noise)
    d = _outdir(out)
    m = len(cfg.initial_points)
    write_csv(d / "trajectory.csv", ["t"] + [f"x_{j + 1}" for j in range(m)],
              np.column_stack([grid.times(), traj.states]).tolist())
    write_json(d / "simulate.json", {
        "command": "simulate", "config": cfg.resolved(), "path_index": 0, "n_steps": grid.n_steps,
        "ordering_violations": traj.ordering_violations, "final": traj.final.tolist(),
    })


@main.command()
@_common
@guarded
def localtime(config, seed, out, threads):
    """Occupation and Tanaka local-time profiles of the first initial point."""
    cfg = _load(config, seed)
    grid = TimeGrid(cfg.T, cfg.dt)
    noise = make_noise(grid, cfg.seed, 0)
    traj = simulate_flow(cfg.drift, cfg.initial_points[:1], grid, noise)
    eps = cfg.estimators["epsilon"] or default_bandwidth(cfg.dt)
    lv = cfg.estimators["levels"]
    levels = default_levels(traj.path(0), eps) if lv is None else np.linspace(lv[0], lv[1], lv[2])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        occ = occupation_profile(traj, 0, levels, eps)
    tan = tanaka_profile(traj, noise, cfg.drift, 0, levels)
    d = _outdir(out)
    write_csv(d / "localtime.csv", ["y", "L_occupation", "L_tanaka"],
              zip(levels.tolist(), occ.values.tolist(), tan.values.tolist()))
    write_json(d / "localtime.json", {
        "command": "localtime", "config": cfg.resolved(), "path_index": 0, "bandwidth": eps,
        "path_min": occ.path_min, "path_max": occ.path_max,
    })


@main.command()
@_common
@guarded
def derivative(config, seed, out, threads):
    """Spatial derivative at each initial point by every applicable method."""
    cfg = _load(config, seed)
    drift = cfg.drift
    grid = TimeGrid(cfg.T, cfg.dt)
    eps = cfg.estimators["epsilon"]
    h = cfg.estimators["h"]
    pts = cfg.initial_points

    def work(idx):
        noise = make_noise_batch(grid, cfg.seed, idx)
        traj = simulate_flow(drift, pts, grid, noise)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            lt = local_time_derivatives(traj, drift, eps)
        fd = np.column_stack([np.atleast_1d(finite_difference(drift, x, h, grid, noise).value) for x in pts])
        sm = None
        if drift.is_smooth:
            sm = np.array([[smooth_derivative(s, j).value for j in range(len(pts))] for s in _single_paths(traj)])
        return lt, fd, sm

    parts = parallel.map_ordered(work, parallel.chunks(cfg.n_paths), threads)
    rows = []
    for lt, fd, sm in parts:
        for p in range(lt.shape[0]):
            for j, x in enumerate(pts):
                rows.append(("local_time_formula", grid.horizon, x, float(lt[p, j])))
                rows.append(("finite_difference", grid.horizon, x, float(fd[p, j])))
                if sm is not None:
                    rows.append(("smooth_ode", grid.horizon, x, float(sm[p, j])))
    d = _outdir(out)
    write_csv(d / "derivative.csv", ["method", "t", "x", "psi"], rows)
    write_json(d / "derivative.json", {
        "command": "derivative", "config": cfg.resolved(), "n_paths": cfg.n_paths,
        "bandwidth": eps or default_bandwidth(cfg.dt), "h": h,
    })


@main.command()
@_common
@guarded
def stationary(config, seed, out, threads):
    """Stationary density, normaliser and the Lyapunov integrals."""
    cfg = _load(config, seed)
    spec = stationary_density(cfg.drift)
    lv = cfg.estimators["levels"]
    if lv is None:
        r = min(10.0, spec.y_hi)
        ys = np.linspace(-r, r, 401)
    else:
        ys = np.linspace(lv[0], lv[1], lv[2])
    d = _outdir(out)
    write_csv(d / "stationary.csv", ["y", "p_stat"], zip(ys.tolist(), spec.density(ys).tolist()))
    payload = {
        "command": "stationary", "config": cfg.resolved(), "a": spec.a, "b": spec.b, "Z": spec.Z,
        "lambda_formula": lyapunov_formula(spec), "derivative_growth_rate": derivative_growth_rate(spec),
    }
    if spec.closed_form:
        payload["lambda_closed_form"] = spec.a * spec.b
    write_json(d / "stationary.json", payload)


@main.command()
@_common
@click.option("--quick", is_flag=True, help=f"Cap the horizon at {QUICK_T:g} and use {QUICK_SEEDS} seeds.")
@guarded
def lyapunov(config, seed, out, threads, quick):
    """Empirical two-point Lyapunov exponent against the stationary formulas."""
    cfg = _load(config, seed)
    spec = stationary_density(cfg.drift)
    ly = cfg.lyapunov
    T, n_seeds = cfg.T, ly["n_seeds"]
    if quick:
        T, n_seeds = min(T, QUICK_T), min(n_seeds, QUICK_SEEDS)
    grid = TimeGrid(T, cfg.dt)
    floor = ly["floor"] if ly["floor"] is not None else default_floor(cfg.drift, cfg.dt)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = empirical_lyapunov(cfg.drift, ly["x1"], ly["x2"], grid, seed_list(cfg.seed, n_seeds),
                                 threads=threads, floor=floor)
    d = _outdir(out)
    write_csv(d / "lyapunov.csv", ["seed", "path_index", "lambda_hat", "status"],
              [(str(r.seed[0]), str(r.seed[1]), r.estimate, r.status) for r in res.runs])
    payload = {
        "command": "lyapunov", "config": cfg.resolved(), "quick": quick, "T": grid.horizon,
        "n_seeds": n_seeds, "renormalization_floor": floor,
        "lambda_empirical_mean": res.mean, "stderr": res.stderr if math.isfinite(res.stderr) else None,
        "excluded": res.excluded, "lambda_formula": lyapunov_formula(spec),
        "derivative_growth_rate": derivative_growth_rate(spec),
    }
    if spec.closed_form:
        payload["lambda_closed_form"] = spec.a * spec.b
    write_json(d / "lyapunov.json", payload)


@main.command()
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Also write verify.json here.")
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--quick", is_flag=True, help="Reduced protocol (T=50, 5 seeds) with widened tolerances.")
@click.option("--only", type=str, default=None, help="Comma-separated criterion numbers.")
@click.option("--force-fail", is_flag=True, hidden=True)
@guarded
def verify(seed, out, threads, quick, only, force_fail):
    """Run the acceptance suite and report pass/fail per criterion."""
    from .verify import report_json, run_suite

    protocol = "quick" if quick else "full"
    try:
        chosen = None if only is None else {int(v) for v in only.split(",")}
    except ValueError:
        raise ConfigError(f"--only expects comma-separated integers, got {only!r}") from None
    results = run_suite(protocol, seed, threads, chosen, force_fail, echo=click.echo)
    ok = all(r.passed for r in results)
    click.echo(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    if out is not None:
        write_json(_outdir(out) / "verify.json", report_json(results, protocol, seed))
    sys.exit(EXIT_OK if ok else EXIT_VERIFY)


@main.command("example-config")
def example_config():
    """Print the bundled two-level configuration."""
    click.echo(shipped_config().read_text(), nl=False)


if __name__ == "__main__":
    main()
