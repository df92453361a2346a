"""Bounded-variation drifts and their distributional derivatives.

A :class:`BVDrift` is a piecewise function: sorted breakpoints split the line
into open intervals, each carrying a segment from a closed catalog
(:class:`Constant`, :class:`Affine`, :class:`TanhScaled`, :class:`Tabulated`).
The measure ``d alpha`` is the sum of atoms ``jump_i * delta_{x_i}`` and the
absolutely continuous part ``alpha'(z) dz``.

The value at a breakpoint is the right limit, so ``two_level(a, b)`` is
``a 1{x >= 0} + b 1{x < 0}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
from scipy.interpolate import CubicSpline

from . import quadrature
from .errors import InvalidIntegrand, UnboundedVariation


# ---------------------------------------------------------------------------
# segment catalog
# ---------------------------------------------------------------------------

class Segment:
    """Smooth piece of a drift. Subclasses are frozen dataclasses."""

    kind: ClassVar[str]

    def value(self, x):
        raise NotImplementedError

    def derivative(self, x):
        raise NotImplementedError

    def primitive(self, x):
        """Some fixed antiderivative of :meth:`value`."""
        raise NotImplementedError

    def variation(self, lo, hi):
        """Total variation on ``[lo, hi]``; ends may be infinite."""
        raise NotImplementedError

    def limit(self, sign):
        """Limit as ``x -> sign * inf``, or ``None`` when unbounded."""
        raise NotImplementedError

    def sup_abs(self, lo, hi):
        raise NotImplementedError

    def growth_constant(self):
        """A ``C`` with ``value(x)**2 <= C (1 + x**2)`` everywhere."""
        raise NotImplementedError

    def knots(self):
        """Interior points where the segment is less smooth."""
        return ()

    def to_record(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(Segment):
    value_: float

    kind: ClassVar[str] = "constant"

    def value(self, x):
        return np.full(np.shape(x), float(self.value_))

    def derivative(self, x):
        return np.zeros(np.shape(x))

    def primitive(self, x):
        return self.value_ * np.asarray(x, dtype=float)

    def variation(self, lo, hi):
        return 0.0

    def limit(self, sign):
        return float(self.value_)

    def sup_abs(self, lo, hi):
        return abs(float(self.value_))

    def growth_constant(self):
        return float(self.value_) ** 2

    def to_record(self):
        return {"kind": self.kind, "value": float(self.value_)}


@dataclass(frozen=True)
class Affine(Segment):
    slope: float
    intercept: float = 0.0

    kind: ClassVar[str] = "affine"

    def value(self, x):
        return self.intercept + self.slope * np.asarray(x, dtype=float)

    def derivative(self, x):
        return np.full(np.shape(x), float(self.slope))

    def primitive(self, x):
        x = np.asarray(x, dtype=float)
        return self.intercept * x + 0.5 * self.slope * x * x

    def variation(self, lo, hi):
        if self.slope == 0:
            return 0.0
        return abs(self.slope) * (hi - lo)

    def limit(self, sign):
        return float(self.intercept) if self.slope == 0 else None

    def sup_abs(self, lo, hi):
        return float(max(abs(self.intercept + self.slope * lo), abs(self.intercept + self.slope * hi)))

    def growth_constant(self):
        # (|m||x| + |c|)^2 <= (m^2 + c^2)(1 + x^2)
        return float(self.slope) ** 2 + float(self.intercept) ** 2

    def to_record(self):
        return {"kind": self.kind, "slope": float(self.slope), "intercept": float(self.intercept)}


def _logcosh(u):
    u = np.abs(u)
    return u + np.log1p(np.exp(-2.0 * u)) - math.log(2.0)


@dataclass(frozen=True)
class TanhScaled(Segment):
    """``offset + amplitude * tanh(scale * (x - shift))``."""

    amplitude: float
    scale: float = 1.0
    shift: float = 0.0
    offset: float = 0.0

    kind: ClassVar[str] = "tanh_scaled"

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return self.offset + self.amplitude * np.tanh(self.scale * (x - self.shift))

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        c = np.cosh(np.clip(self.scale * (x - self.shift), -350.0, 350.0))
        return self.amplitude * self.scale / (c * c)

    def primitive(self, x):
        x = np.asarray(x, dtype=float)
        out = self.offset * x
        if self.scale != 0:
            out = out + self.amplitude / self.scale * _logcosh(self.scale * (x - self.shift))
        return out

    def variation(self, lo, hi):
        # monotone, so the variation is the difference of the end values
        t_hi = math.tanh(self.scale * (hi - self.shift)) if math.isfinite(hi) else math.copysign(1.0, self.scale)
        t_lo = math.tanh(self.scale * (lo - self.shift)) if math.isfinite(lo) else -math.copysign(1.0, self.scale)
        if self.scale == 0:
            return 0.0
        return abs(self.amplitude) * abs(t_hi - t_lo)

    def limit(self, sign):
        return self.offset + self.amplitude * math.copysign(1.0, sign * self.scale) * (self.scale != 0)

    def sup_abs(self, lo, hi):
        ends = []
        for x, sign in ((lo, -1.0), (hi, 1.0)):
            if math.isfinite(x):
                ends.append(abs(float(self.value(x))))
            else:
                ends.append(abs(self.limit(sign)))
        return max(ends)

    def growth_constant(self):
        return (abs(self.offset) + abs(self.amplitude)) ** 2

    def to_record(self):
        return {
            "kind": self.kind,
            "amplitude": float(self.amplitude),
            "scale": float(self.scale),
            "shift": float(self.shift),
            "offset": float(self.offset),
        }


@dataclass(frozen=True)
class Tabulated(Segment):
    """Clamped cubic spline through ``(knots, values)``, flat outside the knots.

    The zero end slopes make the flat continuation continuously
    differentiable.
    """

    knots_: tuple
    values: tuple
    _spline: CubicSpline = field(init=False, repr=False, compare=False)
    _anti: object = field(init=False, repr=False, compare=False)
    _crit: np.ndarray = field(init=False, repr=False, compare=False)

    kind: ClassVar[str] = "tabulated"

    def __post_init__(self):
        k = np.asarray(self.knots_, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if k.ndim != 1 or k.size < 2 or k.shape != v.shape:
            raise ValueError("tabulated segment needs matching knots and values, at least two")
        if np.any(np.diff(k) <= 0):
            raise ValueError("tabulated knots must be strictly increasing")
        object.__setattr__(self, "knots_", tuple(float(t) for t in k))
        object.__setattr__(self, "values", tuple(float(t) for t in v))
        spline = CubicSpline(k, v, bc_type="clamped")
        object.__setattr__(self, "_spline", spline)
        object.__setattr__(self, "_anti", spline.antiderivative())
        roots = spline.derivative().roots(extrapolate=False)
        crit = np.unique(np.concatenate([k, roots[np.isfinite(roots)]]))
        object.__setattr__(self, "_crit", crit)

    def _clip(self, x):
        return np.clip(np.asarray(x, dtype=float), self.knots_[0], self.knots_[-1])

    def value(self, x):
        return self._spline(self._clip(x))

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.knots_[0]) & (x <= self.knots_[-1])
        return np.where(inside, self._spline(self._clip(x), 1), 0.0)

    def primitive(self, x):
        x = np.asarray(x, dtype=float)
        k0, k1 = self.knots_[0], self.knots_[-1]
        xc = self._clip(x)
        base = self._anti(xc)
        return base + self.values[0] * np.minimum(x - k0, 0.0) + self.values[-1] * np.maximum(x - k1, 0.0)

    def _points(self, lo, hi):
        lo_c = min(max(lo, self.knots_[0]), self.knots_[-1])
        hi_c = min(max(hi, self.knots_[0]), self.knots_[-1])
        inner = self._crit[(self._crit > lo_c) & (self._crit < hi_c)]
        return np.concatenate([[lo_c], inner, [hi_c]])

    def variation(self, lo, hi):
        # between critical points of the spline the segment is monotone
        return float(np.abs(np.diff(self._spline(self._points(lo, hi)))).sum())

    def limit(self, sign):
        return self.values[-1] if sign > 0 else self.values[0]

    def sup_abs(self, lo, hi):
        return float(np.abs(self._spline(self._points(lo, hi))).max())

    def growth_constant(self):
        return self.sup_abs(-math.inf, math.inf) ** 2

    def knots(self):
        return self.knots_

    def to_record(self):
        return {"kind": self.kind, "knots": list(self.knots_), "values": list(self.values)}


SEGMENT_KINDS = {cls.kind: cls for cls in (Constant, Affine, TanhScaled, Tabulated)}


def segment_from_record(record):
    """Build a segment from ``{"kind": ..., <parameters>}``."""
    record = dict(record)
    kind = record.pop("kind", None)
    if kind == "constant":
        return Constant(float(record["value"]))
    if kind == "affine":
        return Affine(float(record["slope"]), float(record.get("intercept", 0.0)))
    if kind == "tanh_scaled":
        return TanhScaled(
            float(record["amplitude"]),
            float(record.get("scale", 1.0)),
            float(record.get("shift", 0.0)),
            float(record.get("offset", 0.0)),
        )
    if kind == "tabulated":
        return Tabulated(tuple(record["knots"]), tuple(record["values"]))
    raise ValueError(f"unknown segment kind {kind!r}; expected one of {sorted(SEGMENT_KINDS)}")


# ---------------------------------------------------------------------------
# drifts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BVDrift:
    """Piecewise bounded-variation drift with jump atoms.

    Parameters
    ----------
    breakpoints : sequence of float
        Strictly increasing jump locations.
    segments : sequence of Segment
        ``len(breakpoints) + 1`` pieces, from the left unbounded interval to
        the right one.
    """

    breakpoints: tuple
    segments: tuple
    _bp: np.ndarray = field(init=False, repr=False, compare=False)
    _levels: np.ndarray | None = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        bp = [float(b) for b in self.breakpoints]
        segs = list(self.segments)
        if len(segs) != len(bp) + 1:
            raise ValueError("need exactly one more segment than breakpoints")
        if any(not isinstance(s, Segment) for s in segs):
            raise TypeError("segments must come from the segment catalog")
        if any(not math.isfinite(b) for b in bp) or any(b1 >= b2 for b1, b2 in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be finite and strictly increasing")
        # canonical form: a breakpoint between identical segments carries no atom
        i = 0
        while i < len(bp):
            if segs[i] == segs[i + 1]:
                del bp[i]
                del segs[i + 1]
            else:
                i += 1
        object.__setattr__(self, "breakpoints", tuple(bp))
        object.__setattr__(self, "segments", tuple(segs))
        object.__setattr__(self, "_bp", np.array(bp, dtype=float))
        levels = None
        if all(isinstance(s, Constant) for s in segs):
            levels = np.array([s.value_ for s in segs], dtype=float)
        object.__setattr__(self, "_levels", levels)

    # -- evaluation ---------------------------------------------------------

    def segment_index(self, x):
        return np.searchsorted(self._bp, x, side="right")

    def _piecewise(self, method, x):
        x = np.asarray(x, dtype=float)
        if len(self.segments) == 1:
            return getattr(self.segments[0], method)(x)
        idx = self.segment_index(x)
        out = np.empty(x.shape)
        for i, seg in enumerate(self.segments):
            mask = idx == i
            if mask.any():
                out[mask] = getattr(seg, method)(x[mask])
        return out

    def value(self, x):
        """Right-continuous value of the drift."""
        if self._levels is not None:
            return self._levels[self.segment_index(x)]
        return self._piecewise("value", x)

    __call__ = value

    def derivative(self, x):
        """Density of the absolutely continuous part of ``d alpha``."""
        if self._levels is not None:
            return np.zeros(np.shape(x))
        return self._piecewise("derivative", x)

    def left_value(self, x):
        """Left limit of the drift."""
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self._bp, x, side="left")
        out = np.empty(x.shape)
        for i, seg in enumerate(self.segments):
            mask = idx == i
            if mask.any():
                out[mask] = seg.value(x[mask])
        return out

    @property
    def jumps(self):
        """Jump sizes ``alpha(x_i+) - alpha(x_i-)`` at every breakpoint."""
        return np.array(
            [float(self.segments[i + 1].value(b) - self.segments[i].value(b)) for i, b in enumerate(self.breakpoints)]
        )

    def atoms(self):
        """``(locations, weights)`` of the atomic part of ``d alpha``."""
        j = self.jumps
        keep = j != 0.0
        return self._bp[keep], j[keep]

    def continuous_part(self, x):
        """The drift minus its jump function; continuous on the line."""
        x = np.asarray(x, dtype=float)
        loc, w = self.atoms()
        if loc.size == 0:
            return self.value(x)
        cum = np.concatenate([[0.0], np.cumsum(w)])
        return self.value(x) - cum[np.searchsorted(loc, x, side="right")]

    @property
    def is_smooth(self):
        return self.atoms()[0].size == 0

    def knots(self):
        """Points where quadrature panels should be split."""
        pts = list(self.breakpoints)
        for s in self.segments:
            pts.extend(s.knots())
        return np.unique(np.array(pts, dtype=float))

    def primitive(self, x):
        """``int_0^x alpha(y) dy``, exact for the segment catalog."""
        x = np.asarray(x, dtype=float)
        bp = self.breakpoints
        segs = self.segments
        i0 = int(np.searchsorted(self._bp, 0.0, side="right"))
        # integral from 0 to each breakpoint
        at_bp = np.zeros(len(bp))
        prev, acc = 0.0, 0.0
        for i in range(i0, len(bp)):
            s = segs[i]
            acc += float(s.primitive(bp[i]) - s.primitive(prev))
            at_bp[i] = acc
            prev = bp[i]
        prev, acc = 0.0, 0.0
        for i in range(i0 - 1, -1, -1):
            s = segs[i + 1]
            acc -= float(s.primitive(prev) - s.primitive(bp[i]))
            at_bp[i] = acc
            prev = bp[i]
        idx = self.segment_index(x)
        out = np.empty(x.shape)
        for j, s in enumerate(segs):
            mask = idx == j
            if not mask.any():
                continue
            if j == i0:
                out[mask] = s.primitive(x[mask]) - s.primitive(0.0)
            elif j > i0:
                out[mask] = at_bp[j - 1] + s.primitive(x[mask]) - s.primitive(bp[j - 1])
            else:
                out[mask] = at_bp[j] + s.primitive(x[mask]) - s.primitive(bp[j])
        return out

    # -- global properties --------------------------------------------------

    @property
    def asymptotic_limits(self):
        """``(a, b)`` with ``a`` the limit at ``+inf`` and ``b`` at ``-inf``, or ``None``."""
        a = self.segments[-1].limit(+1)
        b = self.segments[0].limit(-1)
        if a is None or b is None:
            return None
        return float(a), float(b)

    def _segment_bounds(self):
        edges = [-math.inf, *self.breakpoints, math.inf]
        return list(zip(edges[:-1], edges[1:]))

    def sup_abs(self):
        """``sup |alpha|`` over the line (``inf`` if unbounded)."""
        out = 0.0
        for s, (lo, hi) in zip(self.segments, self._segment_bounds()):
            if isinstance(s, Affine) and s.slope != 0:
                return math.inf
            out = max(out, s.sup_abs(lo, hi))
        return out

    def growth_constant(self):
        """A constant ``C`` with ``|alpha(x)|^2 <= C (1 + x^2)``."""
        return max(s.growth_constant() for s in self.segments)

    def total_variation(self, interval=None):
        lo, hi = (-math.inf, math.inf) if interval is None else map(float, interval)
        if hi < lo:
            raise ValueError("empty interval")
        loc, w = self.atoms()
        tv = float(np.abs(w[(loc >= lo) & (loc <= hi)]).sum())
        for s, (a, b) in zip(self.segments, self._segment_bounds()):
            a, b = max(a, lo), min(b, hi)
            if a >= b:
                continue
            v = s.variation(a, b)
            if not math.isfinite(v):
                raise UnboundedVariation(
                    f"unbounded variation: {s.kind} segment on ({a}, {b}) has infinite variation"
                )
            tv += v
        return tv

    def mollify(self, n):
        return MollifiedDrift(self, int(n))

    # -- records ------------------------------------------------------------

    def to_records(self):
        return {"breakpoints": list(self.breakpoints), "segments": [s.to_record() for s in self.segments]}

    @classmethod
    def from_records(cls, breakpoints, segments):
        return cls(tuple(float(b) for b in breakpoints), tuple(segment_from_record(r) for r in segments))


# ---------------------------------------------------------------------------
# mollification
# ---------------------------------------------------------------------------

_KERNEL_NORM = 35.0 / 32.0


def kernel(u):
    """Bump ``(35/32)(1 - u^2)^3`` on ``[-1, 1]``; C^1, nonnegative, unit mass."""
    u = np.asarray(u, dtype=float)
    return np.where(np.abs(u) < 1.0, _KERNEL_NORM * (1.0 - u * u) ** 3, 0.0)


def kernel_cdf(u):
    """``int_{-1}^u kernel``."""
    u = np.clip(np.asarray(u, dtype=float), -1.0, 1.0)
    u2 = u * u
    return np.clip(0.5 + _KERNEL_NORM * u * (1.0 - u2 + 0.6 * u2 * u2 - u2 * u2 * u2 / 7.0), 0.0, 1.0)


def kernel_derivative(u):
    u = np.asarray(u, dtype=float)
    return np.where(np.abs(u) < 1.0, -6.0 * _KERNEL_NORM * u * (1.0 - u * u) ** 2, 0.0)


@dataclass(frozen=True)
class MollifiedDrift:
    """The convolution ``alpha_n = g_n * alpha`` with ``g_n(x) = n g(n x)``.

    The jump part of ``alpha`` is convolved in closed form through the
    kernel CDF; the continuous part by Gauss-Legendre quadrature over the
    kernel support. ``quad_nodes`` controls that quadrature.
    """

    source: BVDrift
    n: int
    quad_nodes: int = 32
    _u: np.ndarray = field(init=False, repr=False, compare=False)
    _w: np.ndarray = field(init=False, repr=False, compare=False)
    _flat: bool = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError("mollification order must be a positive integer")
        u, w = quadrature.gauss_nodes(self.quad_nodes)
        object.__setattr__(self, "_u", u)
        object.__setattr__(self, "_w", w * kernel(u))
        object.__setattr__(self, "_flat", all(isinstance(s, Constant) for s in self.source.segments))

    @property
    def half_width(self):
        return 1.0 / self.n

    def _jump_terms(self, x, fn, scale):
        loc, w = self.source.atoms()
        out = np.zeros(np.shape(x))
        for xi, wi in zip(loc, w):
            out = out + wi * scale * fn(self.n * (x - xi))
        return out

    def value(self, x):
        x = np.asarray(x, dtype=float)
        if self._flat:
            base = np.full(x.shape, float(self.source.segments[0].value_))
        else:
            pts = x[..., None] - self._u / self.n
            base = self.source.continuous_part(pts) @ self._w
        return base + self._jump_terms(x, kernel_cdf, 1.0)

    __call__ = value

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self._flat:
            base = np.zeros(x.shape)
        else:
            pts = x[..., None] - self._u / self.n
            base = self.source.derivative(pts) @ self._w
        return base + self._jump_terms(x, kernel, float(self.n))

    @property
    def is_smooth(self):
        return True

    def atoms(self):
        return np.empty(0), np.empty(0)

    def knots(self):
        h = self.half_width
        k = self.source.knots()
        return np.unique(np.concatenate([k - h, k, k + h])) if k.size else k

    def sup_abs(self):
        return self.source.sup_abs()

    def _variation_window(self, tol=1e-13):
        k = self.source.knots()
        r = 1.0 + (float(np.abs(k).max()) if k.size else 0.0)
        while r < 1e6:
            tails = self.source.total_variation((-math.inf, -r)) + self.source.total_variation((r, math.inf))
            if tails <= tol:
                break
            r *= 2.0
        return -r - self.half_width, r + self.half_width

    def total_variation(self, interval=None, tol=1e-11):
        """``int |alpha_n'|``; without an interval the window drops at most ``1e-13`` of source variation."""
        lo, hi = self._variation_window() if interval is None else map(float, interval)
        h = self.half_width
        grid = np.arange(lo, hi, min(0.05, 8 * h))
        k = self.source.knots()
        # |alpha_n'| has kinks wherever a quadrature node lands a source knot
        offsets = np.concatenate([np.linspace(-h, h, 9), -self._u * h])
        fine = (k[:, None] + offsets[None, :]).ravel() if k.size else np.empty(0)
        knots = np.unique(np.concatenate([[lo, hi], grid, fine]))
        knots = knots[(knots >= lo) & (knots <= hi)]
        return quadrature.integrate(lambda z: np.abs(self.derivative(z)), knots, tol=tol, max_doublings=4)


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def evaluate(drift, x):
    """Drift value at ``x`` (right limit at breakpoints)."""
    return drift.value(x)


def total_variation(drift, interval=None):
    """Total variation over ``interval`` (the whole line by default).

    Raises
    ------
    UnboundedVariation
        If a segment has infinite variation on the requested range.
    """
    return drift.total_variation(interval)


def integrate_against(drift, f, support_hint, knots=None, tol=1e-10):
    """``int f(z) d alpha(z)`` over ``support_hint = [c, d]``.

    Atoms inside ``[c, d]`` contribute ``jump_i * f(x_i)``; the density part
    is integrated by composite Gauss-Legendre, split at drift knots and at
    any extra ``knots`` where ``f`` is not smooth.

    Raises
    ------
    InvalidIntegrand
        If ``f`` returns a non-finite value inside the support.
    """
    c, d = map(float, support_hint)
    if not (math.isfinite(c) and math.isfinite(d)) or d < c:
        raise ValueError("support_hint must be a finite interval [c, d]")

    def checked(z):
        v = np.asarray(f(z), dtype=float)
        v = np.broadcast_to(v, np.shape(z))
        if not np.all(np.isfinite(v)):
            raise InvalidIntegrand("invalid integrand: non-finite value inside the support")
        return v

    loc, w = drift.atoms()
    inside = (loc >= c) & (loc <= d)
    total = float(np.dot(w[inside], checked(loc[inside]))) if inside.any() else 0.0
    if getattr(drift, "_levels", None) is not None:
        return total
    pts = [np.array([c, d]), drift.knots()]
    if knots is not None:
        pts.append(np.asarray(knots, dtype=float))
    panel = np.unique(np.concatenate(pts))
    panel = panel[(panel >= c) & (panel <= d)]
    total += quadrature.integrate(lambda z: checked(z) * drift.derivative(z), panel, tol=tol)
    return total


def mollify(drift, n):
    """Return ``g_n * drift`` as a :class:`MollifiedDrift`."""
    return MollifiedDrift(drift, int(n))


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def zero_drift():
    return BVDrift((), (Constant(0.0),))


def constant_drift(c):
    return BVDrift((), (Constant(float(c)),))


def two_level(a, b):
    """``a 1{x >= 0} + b 1{x < 0}``."""
    return BVDrift((0.0,), (Constant(float(b)), Constant(float(a))))


def neg_tanh():
    """``alpha(x) = -tanh(x)``."""
    return BVDrift((), (TanhScaled(-1.0, 1.0),))


def tanh_with_jump():
    """``-tanh(x)/2 + 1/2`` for ``x < 1/2`` and ``-tanh(x)/2 - 1/2`` after; one atom of weight -1."""
    return BVDrift((0.5,), (TanhScaled(-0.5, 1.0, 0.0, 0.5), TanhScaled(-0.5, 1.0, 0.0, -0.5)))


def tabulated_ramp():
    """Flat 1, a spline ramp from 0.8 to -0.8 on [-1, 1], then flat -1."""
    knots = (-1.0, -0.5, 0.0, 0.5, 1.0)
    values = (0.8, 0.6, 0.0, -0.6, -0.8)
    return BVDrift((-1.0, 1.0), (Constant(1.0), Tabulated(knots, values), Constant(-1.0)))


def catalog():
    """Named test drifts; all are bounded with finite variation on the line."""
    return {
        "zero": zero_drift(),
        "constant": constant_drift(0.5),
        "two_level": two_level(-1.0, 1.0),
        "neg_tanh": neg_tanh(),
        "tanh_jump": tanh_with_jump(),
        "tabulated": tabulated_ramp(),
    }


def stationary_catalog():
    """Catalog drifts with limits ``a < 0 < b`` at infinity."""
    out = {}
    for name, d in catalog().items():
        lim = d.asymptotic_limits
        if lim is not None and lim[0] < 0 < lim[1]:
            out[name] = d
    return out
