"""Local-time estimators for simulated flows.

Two independent routes:

* occupation density: ``(1/eps) dt #{k < K : y <= phi_k < y + eps}``, a
  right-sided window;
* Tanaka's formula for the right local time,
  ``L = 2[(phi_T - y)^+ - (x - y)^+ - sum 1{phi_k > y} dw_k - sum 1{phi_k > y} alpha(phi_k) dt]``,
  with the indicator frozen at the left end of each step (Ito).

The factor 2 comes from ``(X - y)^+`` picking up half of the local time
normalised by the occupation-times formula; without it the two estimators
disagree by exactly that factor.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import TrajectoryNoiseMismatch


def default_bandwidth(dt):
    return max(0.01, 2.0 * math.sqrt(dt))


@dataclass(frozen=True, eq=False)
class LocalTimeProfile:
    """Local time of one path at a grid of levels.

    ``bandwidth`` is ``None`` for Tanaka profiles. ``path_min`` and
    ``path_max`` record the visited range so that coverage can be checked.
    """

    levels: np.ndarray
    values: np.ndarray
    method: str
    bandwidth: float | None
    horizon: float
    path_min: float
    path_max: float
    point_index: int = 0

    def __call__(self, y):
        """Piecewise-linear interpolation in the level, zero outside the grid."""
        return np.interp(y, self.levels, self.values, left=0.0, right=0.0)


def _bandwidth(traj, eps):
    eps = default_bandwidth(traj.grid.dt) if eps is None else float(eps)
    if eps <= 0:
        raise ValueError("bandwidth must be positive")
    if eps < 2.0 * math.sqrt(traj.grid.dt) * (1 - 1e-12):
        warnings.warn(
            f"bandwidth {eps:g} is below 2*sqrt(dt) = {2 * math.sqrt(traj.grid.dt):g}; "
            "occupation counts may be coarse",
            stacklevel=3,
        )
    return eps


def occupation_estimate(traj, point_index, level, bandwidth=None):
    """Occupation-density estimate of the local time at ``level`` up to ``T``.

    Returns a float, or an array with one value per path for batched
    trajectories.
    """
    eps = _bandwidth(traj, bandwidth)
    path = traj.path(point_index)[:-1]
    hits = ((path >= level) & (path < level + eps)).sum(axis=0)
    return traj.grid.dt * hits / eps


def occupation_timecourse(traj, point_index, level, bandwidth=None):
    """Running occupation estimate ``L_level(t_k)`` for ``k = 0..K``."""
    eps = _bandwidth(traj, bandwidth)
    path = traj.path(point_index)[:-1]
    hits = ((path >= level) & (path < level + eps)).astype(float)
    run = np.cumsum(hits, axis=0) * (traj.grid.dt / eps)
    return np.concatenate([np.zeros((1,) + run.shape[1:]), run])


def default_levels(path, bandwidth):
    """Window grid ``y_m = y_0 + m eps`` whose windows cover the visited range."""
    lo = math.floor(float(np.min(path)) / bandwidth) * bandwidth
    n = int(math.floor((float(np.max(path)) - lo) / bandwidth)) + 1
    return lo + bandwidth * np.arange(n + 1)


def occupation_profile(traj, point_index, levels=None, bandwidth=None):
    """Occupation estimates at every level for a single-path trajectory."""
    if traj.batched:
        raise ValueError("occupation_profile takes a single-path trajectory")
    eps = _bandwidth(traj, bandwidth)
    path = traj.path(point_index)
    visited = np.sort(path[:-1])
    if levels is None:
        levels = default_levels(path, eps)
    levels = np.asarray(levels, dtype=float)
    hits = np.searchsorted(visited, levels + eps, side="left") - np.searchsorted(visited, levels, side="left")
    return LocalTimeProfile(
        levels=levels,
        values=traj.grid.dt * hits / eps,
        method="occupation",
        bandwidth=eps,
        horizon=traj.grid.horizon,
        path_min=float(path.min()),
        path_max=float(path.max()),
        point_index=point_index,
    )


def _check_pair(traj, noise):
    if noise.increments.shape[-1] != traj.states.shape[0] - 1:
        raise TrajectoryNoiseMismatch("trajectory/noise mismatch: different number of steps")
    if traj.batched != (noise.increments.ndim == 2):
        raise TrajectoryNoiseMismatch("trajectory/noise mismatch: batch shape differs")
    if traj.batched and noise.increments.shape[0] != traj.states.shape[1]:
        raise TrajectoryNoiseMismatch("trajectory/noise mismatch: different number of paths")


def tanaka_estimate(traj, noise, drift, point_index, level):
    """Local time at ``level`` from Tanaka's formula.

    Raises
    ------
    TrajectoryNoiseMismatch
        If ``noise`` cannot be the path that produced ``traj``.
    """
    _check_pair(traj, noise)
    path = traj.path(point_index)
    left = path[:-1]
    above = left > level
    dw = noise.increments.T
    stochastic = (above * dw).sum(axis=0)
    drift_term = (above * drift.value(left)).sum(axis=0) * traj.grid.dt
    x0 = traj.initial_points[point_index]
    return 2.0 * (np.maximum(path[-1] - level, 0.0) - max(x0 - level, 0.0) - stochastic - drift_term)


def tanaka_profile(traj, noise, drift, point_index, levels):
    """Tanaka estimates at every level, for a single-path trajectory."""
    if traj.batched:
        raise ValueError("tanaka_profile takes a single-path trajectory")
    levels = np.asarray(levels, dtype=float)
    path = traj.path(point_index)
    left = path[:-1]
    order = np.argsort(left, kind="stable")
    s = left[order]
    dw = noise.increments[order]
    a = drift.value(s) * traj.grid.dt
    # suffix sums over states strictly above each level
    tail_w = np.concatenate([np.cumsum(dw[::-1])[::-1], [0.0]])
    tail_a = np.concatenate([np.cumsum(a[::-1])[::-1], [0.0]])
    first = np.searchsorted(s, levels, side="right")
    x0 = traj.initial_points[point_index]
    vals = 2.0 * (
        np.maximum(path[-1] - levels, 0.0) - np.maximum(x0 - levels, 0.0) - tail_w[first] - tail_a[first]
    )
    return LocalTimeProfile(
        levels=levels,
        values=vals,
        method="tanaka",
        bandwidth=None,
        horizon=traj.grid.horizon,
        path_min=float(path.min()),
        path_max=float(path.max()),
        point_index=point_index,
    )


def occupation_formula_check(traj, point_index, f, level_grid):
    """Compare ``dt sum f(phi_k)`` with ``sum f(y_m) L(y_m) dy``.

    ``level_grid`` must be uniform; its spacing is used both as ``dy`` and
    as the occupation bandwidth, so the windows tile the line.

    Returns
    -------
    (lhs, rhs, abs_error)
    """
    levels = np.asarray(level_grid, dtype=float)
    steps = np.diff(levels)
    dy = float(steps[0])
    if dy <= 0 or not np.allclose(steps, dy, rtol=1e-9, atol=0):
        raise ValueError("level_grid must be uniform and increasing")
    path = traj.path(point_index)
    if traj.batched:
        raise ValueError("occupation_formula_check takes a single-path trajectory")
    left = path[:-1]
    if left.min() < levels[0] or left.max() >= levels[-1] + dy:
        raise ValueError("level_grid does not span the trajectory range")
    lhs = traj.grid.dt * float(np.sum(np.broadcast_to(f(left), left.shape)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        prof = occupation_profile(traj, point_index, levels, dy)
    rhs = float(np.sum(np.broadcast_to(f(levels), levels.shape) * prof.values) * dy)
    return lhs, rhs, abs(lhs - rhs)
