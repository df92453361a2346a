"""Seeded Brownian paths and Euler-Maruyama simulation of coupled flows.

All initial points of one call ride the same Brownian increments, so
``phi_k(x_i)`` and ``phi_k(x_j)`` differ only through the drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import parallel, rng
from .drift import mollify
from .errors import NumericalBlowUp

BLOWUP_GUARD = 1e6
_CHECK_EVERY = 1024


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on ``[0, T]``; ``T`` is rounded to a whole number of steps."""

    horizon: float
    dt: float
    n_steps: int = field(init=False)

    def __post_init__(self):
        dt = float(self.dt)
        if not (dt > 0 and math.isfinite(dt)):
            raise ValueError("dt must be positive")
        if not float(self.horizon) > 0:
            raise ValueError("horizon must be positive")
        n = max(1, int(round(float(self.horizon) / dt)))
        object.__setattr__(self, "dt", dt)
        object.__setattr__(self, "n_steps", n)
        object.__setattr__(self, "horizon", n * dt)

    def times(self):
        return np.arange(self.n_steps + 1) * self.dt


@dataclass(frozen=True, eq=False)
class NoisePath:
    """Brownian increments of one path; ``increments[k] = w(t_{k+1}) - w(t_k)``."""

    grid: TimeGrid
    seed: int
    path_index: int
    increments: np.ndarray

    @property
    def w(self):
        """Brownian path on the grid, starting at 0."""
        return np.concatenate([[0.0], np.cumsum(self.increments)])


@dataclass(frozen=True, eq=False)
class NoiseBatch:
    """Independent paths stacked row-wise: ``increments`` has shape ``(P, n_steps)``."""

    grid: TimeGrid
    seed: int
    path_indices: tuple
    increments: np.ndarray

    def __len__(self):
        return len(self.path_indices)

    def __getitem__(self, i):
        return NoisePath(self.grid, self.seed, self.path_indices[i], self.increments[i])


def make_noise(grid, seed, path_index):
    """Increments ``N(0, dt)`` fully determined by ``(grid, seed, path_index)``."""
    inc = math.sqrt(grid.dt) * rng.standard_normals(seed, path_index, grid.n_steps)
    return NoisePath(grid, int(seed), int(path_index), inc)


def make_noise_batch(grid, seed, path_indices):
    idx = tuple(int(i) for i in path_indices)
    inc = np.empty((len(idx), grid.n_steps))
    for r, i in enumerate(idx):
        inc[r] = math.sqrt(grid.dt) * rng.standard_normals(seed, i, grid.n_steps)
    return NoiseBatch(grid, int(seed), idx, inc)


def zero_noise(grid):
    """Deterministic fixture: all increments zero."""
    return NoisePath(grid, 0, 0, np.zeros(grid.n_steps))


def coarsen(noise, factor):
    """Sum consecutive increments, giving the same Brownian path on a grid ``factor`` times coarser."""
    factor = int(factor)
    k = noise.grid.n_steps
    if k % factor:
        raise ValueError("step count not divisible by the coarsening factor")
    grid = TimeGrid(noise.grid.horizon, noise.grid.dt * factor)
    inc = noise.increments.reshape(noise.increments.shape[:-1] + (k // factor, factor)).sum(axis=-1)
    if isinstance(noise, NoiseBatch):
        return NoiseBatch(grid, noise.seed, noise.path_indices, inc)
    return NoisePath(grid, noise.seed, noise.path_index, inc)


@dataclass(frozen=True, eq=False)
class FlowTrajectory:
    """Discretised flow ``phi_k(x_j)``.

    ``states`` has shape ``(n_steps + 1, m)`` for a single noise path, or
    ``(n_steps + 1, P, m)`` for a batch. ``gaps`` holds the final
    neighbour differences ``phi_T(x_{j+1}) - phi_T(x_j)``, propagated by
    their own recursion so that they carry no cancellation error.
    ``ordering_violations`` counts, per path, the (step, neighbour pair)
    events with a non-positive gap.
    """

    grid: TimeGrid
    initial_points: np.ndarray
    states: np.ndarray
    drift: object
    noise: NoisePath | NoiseBatch
    ordering_violations: int | np.ndarray
    gaps: np.ndarray

    @property
    def batched(self):
        return isinstance(self.noise, NoiseBatch)

    def path(self, j):
        """States of initial point ``j``: shape ``(n_steps + 1,)`` or ``(n_steps + 1, P)``."""
        return self.states[..., j]

    @property
    def final(self):
        return self.states[-1]


def _check_points(initial_points):
    x0 = np.atleast_1d(np.asarray(initial_points, dtype=float))
    if x0.ndim != 1 or x0.size == 0:
        raise ValueError("initial_points must be a non-empty 1-D sequence")
    if np.any(np.diff(x0) <= 0):
        raise ValueError("initial_points must be strictly increasing")
    return x0


def _first_bad_step(block, offset):
    bad = ~(np.abs(block) <= BLOWUP_GUARD)
    rows = np.nonzero(bad.reshape(bad.shape[0], -1).any(axis=1))[0]
    return offset + int(rows[0])


def simulate_flow(drift, initial_points, grid, noise, keep="all"):
    """Euler-Maruyama for ``d phi = alpha(phi) dt + dw`` with shared noise.

    ``phi_{k+1}(x_j) = phi_k(x_j) + alpha(phi_k(x_j)) dt + dw_k`` for every
    ``j``, with the same ``dw_k``.

    Parameters
    ----------
    drift : BVDrift or MollifiedDrift
    initial_points : sequence of float
        Strictly increasing starting points.
    grid : TimeGrid
    noise : NoisePath or NoiseBatch
        Must live on ``grid``.
    keep : {"all", "final"}
        ``"final"`` stores only the first and last states (shape ``(2, ...)``).

    Raises
    ------
    NumericalBlowUp
        When a state is non-finite or exceeds ``1e6`` in absolute value.
    """
    x0 = _check_points(initial_points)
    if noise.grid != grid:
        raise ValueError("noise was generated on a different time grid")
    if keep not in ("all", "final"):
        raise ValueError("keep must be 'all' or 'final'")
    dt = grid.dt
    dw = noise.increments.T  # (K,) or (K, P)
    shape = dw.shape[1:] + x0.shape
    x = np.broadcast_to(x0, shape).copy()
    gaps = np.broadcast_to(np.diff(x0), shape[:-1] + (x0.size - 1,)).copy()
    violations = np.zeros(shape[:-1], dtype=np.int64)
    coupled = x0.size > 1
    n = grid.n_steps
    value = drift.value
    store = keep == "all"
    if store:
        states = np.empty((n + 1,) + shape)
        states[0] = x

    for k in range(n):
        a = value(x)
        x = x + a * dt + dw[k][..., None]
        if coupled:
            gaps = gaps + np.diff(a, axis=-1) * dt
            violations = violations + (gaps <= 0).sum(axis=-1)
        if store:
            states[k + 1] = x
        if (k + 1) % _CHECK_EVERY == 0 or k + 1 == n:
            if store:
                lo = (k // _CHECK_EVERY) * _CHECK_EVERY + 1
                block = states[lo : k + 2]
                if not np.all(np.abs(block) <= BLOWUP_GUARD):
                    raise NumericalBlowUp(_first_bad_step(block, lo))
            elif not np.all(np.abs(x) <= BLOWUP_GUARD):
                raise NumericalBlowUp(k + 1)

    if not store:
        states = np.stack([np.broadcast_to(x0, shape), x])
    if not isinstance(noise, NoiseBatch):
        violations = int(violations)
    return FlowTrajectory(grid, x0, states, drift, noise, violations, gaps)


def mollified_convergence_report(drift, x, grid, orders, n_paths, seed, threads=1):
    """Coupled-path moments ``E|phi^n_T(x) - phi_T(x)|^p`` for ``p = 1, 2``.

    Each mollified flow is driven by the same noise path as the original.

    Returns
    -------
    list of dict
        One row per order: ``{"n", "mean_abs", "mean_sq"}``.
    """
    orders = [int(n) for n in orders]
    if any(b <= a for a, b in zip(orders, orders[1:])):
        raise ValueError("orders must be increasing")
    if n_paths < 100:
        raise ValueError("n_paths must be at least 100")
    smoothed = [mollify(drift, n) for n in orders]

    def work(idx):
        noise = make_noise_batch(grid, seed, idx)
        ref = simulate_flow(drift, [x], grid, noise, keep="final").final[:, 0]
        out = []
        for md in smoothed:
            diff = np.abs(simulate_flow(md, [x], grid, noise, keep="final").final[:, 0] - ref)
            out.append((diff.sum(), (diff * diff).sum()))
        return out

    parts = parallel.map_ordered(work, parallel.chunks(n_paths), threads)
    rows = []
    for i, n in enumerate(orders):
        s1 = sum(p[i][0] for p in parts)
        s2 = sum(p[i][1] for p in parts)
        rows.append({"n": n, "mean_abs": s1 / n_paths, "mean_sq": s2 / n_paths})
    return rows
