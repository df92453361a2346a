"""Composite Gauss-Legendre quadrature on panels with refinement.

Integrands are vectorised callables. Panel boundaries are supplied by the
caller at every point where the integrand may lose smoothness (drift
breakpoints, kinks of interpolants), so each panel sees a smooth function.
"""

import numpy as np

_NODES = {}


def gauss_nodes(order):
    """Legendre nodes and weights on [-1, 1], cached by order."""
    if order not in _NODES:
        _NODES[order] = np.polynomial.legendre.leggauss(order)
    return _NODES[order]


def panel_integrals(f, knots, order=10):
    """Integral of ``f`` over each interval ``[knots[i], knots[i+1]]``."""
    knots = np.asarray(knots, dtype=float)
    u, w = gauss_nodes(order)
    lo, hi = knots[:-1], knots[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * u[None, :]
    vals = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    return (vals * w[None, :]).sum(axis=1) * half


def subdivide(knots, pieces):
    """Split every interval between consecutive knots into ``pieces`` equal parts."""
    knots = np.asarray(knots, dtype=float)
    if pieces == 1:
        return knots
    t = np.arange(pieces) / pieces
    inner = knots[:-1, None] + (knots[1:] - knots[:-1])[:, None] * t[None, :]
    return np.append(inner.ravel(), knots[-1])


def integrate(f, knots, tol=1e-10, order=10, max_doublings=12):
    """Integrate ``f`` over ``[knots[0], knots[-1]]``.

    The panel set is doubled until two successive estimates agree to
    ``tol`` (absolute, or relative for large values).

    Parameters
    ----------
    f : callable
        Vectorised integrand.
    knots : array_like
        Sorted panel boundaries; must include both end points.
    tol : float
        Convergence tolerance.

    Returns
    -------
    float
    """
    knots = np.unique(np.asarray(knots, dtype=float))
    if knots.size < 2:
        return 0.0
    prev = panel_integrals(f, knots, order).sum()
    pieces = 1
    for _ in range(max_doublings):
        pieces *= 2
        cur = panel_integrals(f, subdivide(knots, pieces), order).sum()
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return float(cur)
        prev = cur
    return float(prev)


def partial_integrals(f, lo, hi, order=16):
    """Elementwise integral of ``f`` over ``[lo_i, hi_i]`` with one panel each."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    u, w = gauss_nodes(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[..., None] + half[..., None] * u
    vals = np.asarray(f(x.reshape(-1)), dtype=float).reshape(x.shape)
    return (vals * w).sum(axis=-1) * half
