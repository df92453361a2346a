"""Spatial derivative of the flow, three ways.

* ``local_time_formula``: ``exp( int L_z(t) d alpha(z) )`` from an estimated
  local-time profile;
* ``smooth_ode``: ``exp( int_0^t alpha'(phi_s) ds )`` for a smooth drift;
* ``finite_difference``: ratio of coupled flow increments.

The three agree in the continuum limit; the Newton-Leibniz check
integrates the first one over initial points and compares with the
increment of the flow.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .drift import integrate_against
from .errors import InsufficientLevelCoverage, MonotonicityBreach, NotSmoothDrift
from .flow import simulate_flow
from .local_time import occupation_profile

METHODS = ("local_time_formula", "smooth_ode", "finite_difference")


@dataclass(frozen=True, eq=False)
class DerivativeEstimate:
    """``value`` is a float for one path or an array with one entry per path."""

    value: float | np.ndarray
    method: str
    t: float
    x: float | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not np.all(np.asarray(self.value) > 0):
            raise ValueError("derivative estimates must be positive")


def local_time_exponent(profile, drift):
    """``int L(z) d alpha(z)`` with ``L`` interpolated linearly between levels."""
    levels = profile.levels
    top = levels[-1] + (profile.bandwidth or 0.0)
    loc, _ = drift.atoms()
    visited = (loc >= profile.path_min) & (loc <= profile.path_max)
    missed = visited & ((loc < levels[0]) | (loc > top))
    if missed.any():
        raise InsufficientLevelCoverage(
            f"insufficient level coverage: atom at {loc[missed][0]:g} visited but outside the level grid"
        )
    return integrate_against(drift, profile, (levels[0], levels[-1]), knots=levels)


def derivative_via_local_time(profile, drift, x=None, seed=None):
    """``exp{int L_z d alpha(z)}`` for one local-time profile.

    Raises
    ------
    InsufficientLevelCoverage
        If the trajectory visited an atom of ``d alpha`` that the profile's
        level grid does not reach.
    """
    value = math.exp(local_time_exponent(profile, drift))
    return DerivativeEstimate(value, "local_time_formula", profile.horizon, x, seed)


def smooth_derivative(traj, point_index):
    """``exp(dt sum_k alpha'(phi_k))`` along the simulated path.

    Raises
    ------
    NotSmoothDrift
        If the trajectory's drift has atoms.
    """
    drift = traj.drift
    if not getattr(drift, "is_smooth", False):
        raise NotSmoothDrift("not a smooth drift: the drift measure has atoms")
    left = traj.path(point_index)[:-1]
    exponent = traj.grid.dt * drift.derivative(left).sum(axis=0)
    seed = getattr(traj.noise, "seed", None)
    return DerivativeEstimate(np.exp(exponent), "smooth_ode", traj.grid.horizon,
                              float(traj.initial_points[point_index]), seed)


def finite_difference(drift, x, h, grid, noise):
    """``(phi_T(x + h) - phi_T(x)) / h`` from one coupled simulation.

    The denominator is the spacing actually represented in floating point,
    so a translation flow gives exactly 1.

    Raises
    ------
    MonotonicityBreach
        If the two points swapped order on some path.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    traj = simulate_flow(drift, [x, x + h], grid, noise, keep="final")
    if np.any(np.asarray(traj.ordering_violations) > 0):
        raise MonotonicityBreach("monotonicity breach, shrink dt")
    h_eff = traj.initial_points[1] - traj.initial_points[0]
    value = traj.gaps[..., 0] / h_eff
    if np.ndim(value) == 0:
        value = float(value)
    return DerivativeEstimate(value, "finite_difference", grid.horizon, float(x), noise.seed)


def _single_paths(traj):
    if not traj.batched:
        return [traj]
    from .flow import FlowTrajectory

    out = []
    for p in range(traj.states.shape[1]):
        out.append(
            FlowTrajectory(
                traj.grid,
                traj.initial_points,
                traj.states[:, p, :],
                traj.drift,
                traj.noise[p],
                int(np.asarray(traj.ordering_violations)[p]),
                traj.gaps[p],
            )
        )
    return out


def local_time_derivatives(traj, drift=None, bandwidth=None):
    """Local-time-formula derivative at every initial point of ``traj``.

    Returns an array of shape ``(m,)``, or ``(P, m)`` for batches.
    """
    drift = traj.drift if drift is None else drift
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for single in _single_paths(traj):
            rows.append(
                [
                    math.exp(local_time_exponent(occupation_profile(single, j, bandwidth=bandwidth), drift))
                    for j in range(traj.initial_points.size)
                ]
            )
    out = np.array(rows)
    return out if traj.batched else out[0]


def newton_leibniz_check(drift, x1, x2, grid, noise, n_quad_points=21, bandwidth=None):
    """Compare ``phi_T(x2) - phi_T(x1)`` with the trapezoid integral of the local-time derivative.

    All quadrature points ride the same noise path(s).

    Returns
    -------
    (lhs, rhs, rel_error)
        Floats, or arrays with one entry per path for a batch.
    """
    if not x1 < x2:
        raise ValueError("need x1 < x2")
    if n_quad_points < 2:
        raise ValueError("need at least two quadrature points")
    ys = np.linspace(x1, x2, int(n_quad_points))
    traj = simulate_flow(drift, ys, grid, noise)
    lhs = traj.gaps.sum(axis=-1)
    psi = local_time_derivatives(traj, drift, bandwidth)
    rhs = np.trapezoid(psi, ys, axis=-1)
    rel = np.abs(lhs - rhs) / np.abs(lhs)
    if not traj.batched:
        return float(lhs), float(rhs), float(rel)
    return lhs, rhs, rel
