"""Scale function, stationary law and the ergodic Lyapunov integrals.

For ``d phi = alpha(phi) dt + dw`` with ``alpha -> a < 0`` at ``+inf`` and
``alpha -> b > 0`` at ``-inf`` the stationary density is
``p(y) = exp{2 int_0^y alpha} / Z``. Everything here is built on the exact
primitive of the drift; integrals over the line are truncated where the
unnormalised density drops below ``1e-17`` of its peak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import quadrature
from .drift import Constant, integrate_against
from .errors import NoStationaryRegime

_TAIL_LOG = math.log(1e-17)
_PANEL = 0.05
_MAX_RADIUS = 1e5


def _limits(drift):
    lim = drift.asymptotic_limits
    if lim is None:
        raise NoStationaryRegime("no stationary regime: drift has no finite limits at infinity")
    a, b = lim
    if not (a < 0 < b):
        raise NoStationaryRegime(f"no stationary regime: need a < 0 < b, got a={a:g}, b={b:g}")
    return a, b


def _is_two_level(drift):
    return (
        len(drift.breakpoints) == 1
        and drift.breakpoints[0] == 0.0
        and all(isinstance(s, Constant) for s in drift.segments)
    )


@dataclass(frozen=True, eq=False)
class StationarySpec:
    """Stationary quantities of one drift; immutable after construction."""

    drift: object
    a: float
    b: float
    log_z: float
    y_lo: float
    y_hi: float
    closed_form: bool
    knots: np.ndarray = field(repr=False)
    _cdf_knots: np.ndarray = field(repr=False)
    _tail_knots: np.ndarray = field(repr=False)

    @property
    def Z(self):
        return math.exp(self.log_z)

    # -- density and distribution function ---------------------------------

    def log_density(self, y):
        return 2.0 * self.drift.primitive(y) - self.log_z

    def density(self, y):
        y = np.asarray(y, dtype=float)
        if self.closed_form:
            a, b = self.a, self.b
            c = 2 * a * b / (a - b)
            return np.where(y >= 0, c * np.exp(2 * a * y), c * np.exp(2 * b * y))
        return np.exp(self.log_density(y))

    def _accumulate(self, y, at_knots, f, sign):
        y = np.asarray(y, dtype=float)
        k = np.clip(np.searchsorted(self.knots, y, side="right") - 1, 0, self.knots.size - 2)
        inside = np.clip(y, self.y_lo, self.y_hi)
        return at_knots[k] + sign * quadrature.partial_integrals(f, self.knots[k], inside)

    def cdf(self, y):
        """``P_stat(y) = int_{-inf}^y p``."""
        y = np.asarray(y, dtype=float)
        if self.closed_form:
            a, b = self.a, self.b
            with np.errstate(over="ignore"):
                return np.where(y >= 0, 1 + b / (a - b) * np.exp(2 * a * y), a / (a - b) * np.exp(2 * b * y))
        out = self._accumulate(y, self._cdf_knots, self.density, 1.0)
        return np.clip(np.where(y <= self.y_lo, 0.0, np.where(y >= self.y_hi, 1.0, out)), 0.0, 1.0)

    def tail_alpha(self, z):
        """``int_z^{+inf} alpha(y) p(y) dy``."""
        z = np.asarray(z, dtype=float)
        out = self._accumulate(z, self._tail_knots, lambda y: self.drift.value(y) * self.density(y), -1.0)
        return np.where(z <= self.y_lo, self._tail_knots[0], np.where(z >= self.y_hi, 0.0, out))

    # -- scale function and the driftless picture ---------------------------

    def scale(self, x):
        return scale_function(self.drift, x)

    def inverse_scale(self, y):
        """``q = s^{-1}``."""
        y = np.asarray(y, dtype=float)
        if self.closed_form:
            a, b = self.a, self.b
            return np.where(y >= 0, -np.log1p(-2 * a * np.maximum(y, 0)) / (2 * a),
                            -np.log1p(-2 * b * np.minimum(y, 0)) / (2 * b))
        out = np.empty(y.shape)
        for i, v in np.ndenumerate(y):
            lo, hi = -1.0, 1.0
            while float(scale_function(self.drift, lo)) > v:
                lo *= 2.0
            while float(scale_function(self.drift, hi)) < v:
                hi *= 2.0
            out[i] = brentq(lambda x: float(scale_function(self.drift, x)) - v, lo, hi, xtol=1e-14, rtol=1e-14)
        return out

    def sigma(self, y):
        """``sigma(y) = s'(q(y))``, the coefficient of ``d eta = sigma(eta) dw`` for ``eta = s(phi)``."""
        return np.exp(-2.0 * self.drift.primitive(self.inverse_scale(y)))


def _truncation(drift, a, b):
    k = drift.knots()
    r = 1.0 + (float(np.abs(k).max()) if k.size else 0.0)
    while r <= _MAX_RADIUS:
        ys = np.linspace(-r, r, 20001)
        phi = 2.0 * drift.primitive(ys)
        peak = float(phi.max())
        right_ok = phi[-1] - peak < _TAIL_LOG and float(drift.value(r)) < 0
        left_ok = phi[0] - peak < _TAIL_LOG and float(drift.value(-r)) > 0
        if right_ok and left_ok:
            return -r, r, peak
        r *= 2.0
    raise NoStationaryRegime("no stationary regime: normalising constant diverges")


def stationary_density(drift, closed_form=None):
    """Build the :class:`StationarySpec` of ``drift``.

    Parameters
    ----------
    closed_form : bool, optional
        Use the explicit two-level formulas. Defaults to ``True`` exactly
        when the drift is ``a 1{x >= 0} + b 1{x < 0}``.

    Raises
    ------
    NoStationaryRegime
        Without limits ``a < 0 < b`` at infinity.
    """
    a, b = _limits(drift)
    two_level = _is_two_level(drift)
    if closed_form is None:
        closed_form = two_level
    if closed_form and not two_level:
        raise ValueError("closed form is only available for the two-level drift")
    y_lo, y_hi, peak = _truncation(drift, a, b)
    inner = drift.knots()
    inner = inner[(inner > y_lo) & (inner < y_hi)]
    knots = np.unique(np.concatenate([np.arange(y_lo, y_hi, _PANEL), [y_hi], inner]))

    def unnormalised(y):
        return np.exp(2.0 * drift.primitive(y) - peak)

    mass = quadrature.panel_integrals(unnormalised, knots, order=16)
    if closed_form:
        log_z = -math.log(2 * a * b / (a - b))
    else:
        log_z = peak + math.log(mass.sum())
    spec = StationarySpec(drift, a, b, log_z, y_lo, y_hi, closed_form, knots, np.empty(0), np.empty(0))
    cdf_knots = np.concatenate([[0.0], np.cumsum(quadrature.panel_integrals(spec.density, knots, order=16))])
    tail_panels = quadrature.panel_integrals(lambda y: drift.value(y) * spec.density(y), knots, order=16)
    tail_knots = np.concatenate([np.cumsum(tail_panels[::-1])[::-1], [0.0]])
    object.__setattr__(spec, "_cdf_knots", cdf_knots)
    object.__setattr__(spec, "_tail_knots", tail_knots)
    return spec


def scale_function(drift, x):
    """``s(x) = int_0^x exp{-2 int_0^z alpha} dz``.

    Raises
    ------
    NoStationaryRegime
        Without limits ``a < 0 < b`` at infinity.
    """
    a, b = _limits(drift)
    x = np.asarray(x, dtype=float)
    if _is_two_level(drift):
        with np.errstate(over="ignore"):
            pos = -(np.expm1(-2 * a * np.maximum(x, 0))) / (2 * a)
            neg = -(np.expm1(-2 * b * np.minimum(x, 0))) / (2 * b)
        return np.where(x >= 0, pos, neg)
    k = drift.knots()

    def one(v):
        if v == 0:
            return 0.0
        lo, hi = min(0.0, v), max(0.0, v)
        panels = np.concatenate([[lo, hi], np.arange(lo, hi, 0.25), k[(k > lo) & (k < hi)]])
        with np.errstate(over="ignore"):
            val = quadrature.integrate(lambda z: np.exp(-2.0 * drift.primitive(z)), panels, tol=1e-13)
        return val if v > 0 else -val

    out = np.array([one(float(v)) for v in x.ravel()]).reshape(x.shape)
    return out if out.ndim else float(out)


def lyapunov_formula(spec):
    """``int ( -int_z^inf alpha dP_stat ) d alpha(z)``, evaluated by quadrature."""
    return integrate_against(spec.drift, lambda z: -spec.tail_alpha(z), (spec.y_lo, spec.y_hi), knots=spec.knots)


def derivative_growth_rate(spec):
    """``int p_stat(z) d alpha(z)``, the ergodic rate of ``ln grad phi_t``.

    By the occupation-times formula ``L_z(t) / t -> p_stat(z)``, so this is
    the almost-sure limit of ``(1/t) int L_z(t) d alpha(z)``.
    """
    return integrate_against(spec.drift, spec.density, (spec.y_lo, spec.y_hi), knots=spec.knots)


def ergodic_average_target(spec, z):
    """``int_z^{+inf} alpha dP_stat``; ``z`` may be infinite."""
    if z == math.inf:
        return 0.0
    return float(spec.tail_alpha(z))
