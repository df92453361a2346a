"""Empirical Lyapunov exponents and ergodic checks from long simulations.

The two-point exponent ``lim ln(phi_t(x2) - phi_t(x1)) / t`` is strongly
negative, so the raw separation leaves floating-point range (and, for a
jump drift, the Euler scheme's resolution ``(b - a) dt``) within a few
time units. The default estimator therefore renormalises: it follows
``phi_t(x1)`` and the separation ``d``, and whenever ``d`` falls below a
floor it books ``ln(d / d_ref)`` and resets ``d = d_ref``. ``r(t)`` is the
booked total plus ``ln d``. ``renormalize=False`` gives the raw estimator.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import parallel, rng
from .errors import ConfigurationUnstable
from .flow import make_noise, simulate_flow
from .stationary import ergodic_average_target, stationary_density

SEED_CHUNK = 8
MAX_EXCLUDED = 0.10
UNDERFLOW = 1e-300
BURN_IN = 0.05


@dataclass(frozen=True, eq=False)
class LyapunovRun:
    """One two-point run.

    ``r`` holds ``ln(phi_t(x2) - phi_t(x1))`` (renormalised) at
    ``times``. ``status`` is ``"ok"``, ``"breach"`` (the points swapped
    order, run excluded) or ``"clamped"`` (separation underflowed or fell
    below the floating-point resolution of ``phi_t(x1)``; the estimate uses
    the last valid checkpoints).
    """

    x1: float
    x2: float
    seed: tuple
    times: np.ndarray
    r: np.ndarray
    estimate: float
    naive: float
    renormalizations: int
    status: str

    @property
    def valid(self):
        return self.status != "breach"


class LyapunovSummary(NamedTuple):
    mean: float
    stderr: float
    values: np.ndarray
    runs: list
    excluded: int


def default_floor(drift, dt):
    """Renormalisation floor ``max(sqrt(dt V / 2S), 4 V dt)``.

    ``V`` is the total variation and ``S = sup |alpha|``. The floor must
    sit well above the per-step separation change ``V dt`` of the Euler
    scheme and well below the stationary length scale.
    """
    var = float(drift.total_variation())
    sup = float(drift.sup_abs())
    if var == 0 or sup == 0:
        return 1e-3
    return max(math.sqrt(dt * var / (2 * sup)), 4.0 * var * dt)


def _seed_key(s):
    if isinstance(s, (tuple, list)):
        return int(s[0]), int(s[1])
    return int(s), 0


def seed_list(seed, n):
    """``n`` independent path keys under one root seed."""
    return [(int(seed), i) for i in range(int(n))]


def _window(times, r, last):
    """``(r(T) - r(T/2)) / (T/2)`` and ``r(T)/T`` on checkpoints up to ``last``."""
    t_end = times[last]
    half = int(np.searchsorted(times, t_end / 2, side="left"))
    if half >= last:
        return r[last] / t_end, r[last] / t_end
    return (r[last] - r[half]) / (t_end - times[half]), r[last] / t_end


def _run_group(drift, x1, x2, grid, keys, floor, ref, renormalize, every):
    n = grid.n_steps
    dt = grid.dt
    S = len(keys)
    noise = np.empty((S, n))
    sq = math.sqrt(dt)
    for i, (s, p) in enumerate(keys):
        noise[i] = sq * rng.standard_normals(s, p, n)
    dw = noise.T.copy()
    del noise

    marks = sorted(set(range(every, n + 1, every)) | {n // 2, n} - {0})
    mark_set = set(marks)
    times = np.array([0.0] + [k * dt for k in marks])
    r = np.full((len(marks) + 1, S), np.nan)
    r[0] = math.log(x2 - x1)

    pos = np.full(S, float(x1))
    d = np.full(S, float(x2 - x1))
    booked = np.zeros(S)
    count = np.zeros(S, dtype=np.int64)
    status = np.zeros(S, dtype=np.int8)  # 0 ok, 1 breach, 2 clamped
    stop = np.full(S, len(marks), dtype=np.int64)
    pair = np.empty((2, S))
    value = drift.value
    lo_ref = math.log(ref)
    row = 0
    for k in range(n):
        pair[0] = pos
        pair[1] = pos + d
        a = value(pair)
        pos = pos + a[0] * dt + dw[k]
        d = d + (a[1] - a[0]) * dt
        if renormalize:
            low = d < floor
            if low.any():
                bad = low & (d <= 0)
                if bad.any():
                    status[bad & (status == 0)] = 1
                    d = np.where(bad, ref, d)
                    low = low & ~bad
                booked[low] += np.log(d[low]) - lo_ref
                count[low] += 1
                d[low] = ref
        else:
            # below the resolution of pos the drift difference vanishes and d freezes
            bad = (d <= UNDERFLOW) | (pos + d == pos)
            if bad.any():
                breach = bad & (d <= 0) & (status == 0)
                clamp = bad & (d > 0) & (status == 0)
                status[breach] = 1
                status[clamp] = 2
                stop[clamp] = row
                d = np.where(bad, UNDERFLOW, d)
        if k + 1 in mark_set:
            row += 1
            r[row] = booked + np.log(d)

    runs = []
    for i, key in enumerate(keys):
        st = ("ok", "breach", "clamped")[status[i]]
        last = int(stop[i])
        if st == "breach" or last == 0:
            est = naive = math.nan
        else:
            est, naive = _window(times, r[:, i], last)
        runs.append(
            LyapunovRun(float(x1), float(x2), key, times, r[:, i].copy(), float(est), float(naive),
                        int(count[i]), st)
        )
    return runs


def empirical_lyapunov(drift, x1, x2, grid, seeds, threads=1, renormalize=True, floor=None,
                       checkpoint_every=None):
    """Tail-window Lyapunov estimates over independent seeds.

    Parameters
    ----------
    drift : BVDrift
    x1, x2 : float
        Initial points, ``x1 < x2``.
    grid : TimeGrid
    seeds : list
        Ints (path index 0) or ``(seed, path_index)`` pairs.
    threads : int
        Seeds are processed in fixed groups of eight, so the thread count
        never changes the result.
    renormalize : bool
        Keep the separation above ``floor`` (see module docstring).
    floor : float, optional
        Defaults to :func:`default_floor`; the reset value is ``2 floor``.
    checkpoint_every : int, optional
        Steps between checkpoints of ``r``, default one time unit.

    Returns
    -------
    LyapunovSummary
        ``(mean, stderr, values, runs, excluded)`` over valid runs.

    Raises
    ------
    ConfigurationUnstable
        If more than 10% of the runs breach ordering.
    """
    if not x1 < x2:
        raise ValueError("need x1 < x2")
    keys = [_seed_key(s) for s in seeds]
    if not keys:
        raise ValueError("need at least one seed")
    if grid.horizon < 50:
        warnings.warn(f"horizon T={grid.horizon:g} < 50; the tail window may be dominated by transients",
                      stacklevel=2)
    if not renormalize:
        floor = 1.0  # unused
    elif floor is None:
        floor = default_floor(drift, grid.dt)
    if renormalize and not 0 < floor < (x2 - x1):
        raise ValueError("renormalisation floor must lie in (0, x2 - x1)")
    every = checkpoint_every or max(1, int(round(1.0 / grid.dt)))
    groups = [keys[i : i + SEED_CHUNK] for i in range(0, len(keys), SEED_CHUNK)]
    parts = parallel.map_ordered(
        lambda g: _run_group(drift, x1, x2, grid, g, floor, 2.0 * floor, renormalize, every), groups, threads
    )
    runs = [run for part in parts for run in part]
    excluded = sum(not run.valid for run in runs)
    if excluded > MAX_EXCLUDED * len(runs):
        raise ConfigurationUnstable(
            f"configuration unstable: {excluded} of {len(runs)} runs breached ordering; shrink dt"
        )
    values = np.array([run.estimate for run in runs if run.valid])
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else math.nan
    return LyapunovSummary(mean, stderr, values, runs, excluded)


def _long_path(drift, x, grid, seed):
    seed, idx = _seed_key(seed)
    noise = make_noise(grid, seed, idx)
    path = simulate_flow(drift, [x], grid, noise).path(0)[:-1]
    burn = int(math.ceil(BURN_IN * grid.n_steps))
    return path[burn:]


def ergodic_average_check(drift, x, z_grid, grid, seed, spec=None):
    """Time averages of ``1{phi > z} alpha(phi)`` against their stationary targets.

    The first 5% of the horizon is discarded. ``z = -inf`` is accepted.

    Returns
    -------
    list of dict
        Rows ``{"z", "empirical", "target", "abs_error"}``.
    """
    spec = stationary_density(drift) if spec is None else spec
    path = _long_path(drift, x, grid, seed)
    a = drift.value(path)
    rows = []
    for z in z_grid:
        z = float(z)
        emp = float(np.mean(np.where(path > z, a, 0.0)))
        target = ergodic_average_target(spec, z) if z > -math.inf else float(spec.tail_alpha(spec.y_lo))
        rows.append({"z": z, "empirical": emp, "target": target, "abs_error": abs(emp - target)})
    return rows


@dataclass(frozen=True, eq=False)
class OccupationComparison:
    edges: np.ndarray
    empirical: np.ndarray
    stationary: np.ndarray
    distance: float
    n_samples: int


def occupation_vs_stationary(drift, x, grid, seed, bins=100, spec=None):
    """Occupation histogram of one long path against ``p_stat``.

    ``distance`` is the Kolmogorov-Smirnov statistic
    ``sup_y |F_emp(y) - P_stat(y)|`` over the post-burn-in samples, so it
    does not depend on ``bins``.
    """
    spec = stationary_density(drift) if spec is None else spec
    path = _long_path(drift, x, grid, seed)
    s = np.sort(path)
    n = s.size
    F = spec.cdf(s)
    i = np.arange(1, n + 1)
    dist = float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))
    hist, edges = np.histogram(path, bins=int(bins), density=True)
    ref = np.diff(spec.cdf(edges)) / np.diff(edges)
    return OccupationComparison(edges, hist, ref, dist, n)
