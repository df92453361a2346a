import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from bvflow.drift import (
    Affine,
    BVDrift,
    Constant,
    MollifiedDrift,
    TanhScaled,
    Tabulated,
    catalog,
    evaluate,
    integrate_against,
    kernel,
    kernel_cdf,
    mollify,
    neg_tanh,
    stationary_catalog,
    tabulated_ramp,
    tanh_with_jump,
    total_variation,
    two_level,
    zero_drift,
)
from bvflow.errors import InvalidIntegrand, UnboundedVariation


def test_two_level_is_right_continuous():
    d = two_level(-1.0, 1.0)
    assert evaluate(d, 0.0) == -1.0
    assert evaluate(d, -1e-12) == 1.0
    assert float(d.left_value(0.0)) == 1.0
    assert evaluate(d, 5.0) == -1.0


def test_total_variation_catalog():
    assert total_variation(two_level(-1.0, 1.0)) == 2.0
    assert total_variation(two_level(-2.0, 3.0)) == 5.0
    assert total_variation(zero_drift()) == 0.0
    assert math.isclose(total_variation(neg_tanh()), 2.0, rel_tol=1e-14)
    # continuous part falls by 1, the atom at 1/2 adds 1
    assert math.isclose(total_variation(tanh_with_jump()), 2.0, rel_tol=1e-12)


def test_total_variation_on_interval_matches_quad():
    d = tabulated_ramp()
    oracle, _ = integrate.quad(lambda x: abs(float(d.derivative(x))), -1, 1, points=[-0.5, 0, 0.5],
                               epsabs=1e-13)
    # the closed interval also holds the two atoms of weight 0.2 at -1 and 1
    assert math.isclose(d.total_variation((-1.0, 1.0)), oracle + 0.4, rel_tol=1e-10)


def test_unbounded_variation_raises():
    d = BVDrift((), (Affine(-1.0, 0.0),))
    with pytest.raises(UnboundedVariation):
        total_variation(d)
    assert total_variation(d, (-2.0, 3.0)) == 5.0


@pytest.mark.parametrize("name", sorted(catalog()))
def test_primitive_matches_quad(name):
    d = catalog()[name]
    for x in (-3.7, -0.5, 0.0, 0.25, 0.5, 2.9):
        pts = [p for p in d.knots() if min(0, x) < p < max(0, x)]
        oracle, _ = integrate.quad(lambda y: float(d.value(y)), 0.0, x, points=pts or None, epsabs=1e-13)
        assert abs(float(d.primitive(x)) - oracle) < 1e-10


def test_integrate_against_atoms_and_density():
    d = two_level(-1.0, 3.0)
    # d alpha = (a - b) delta_0
    assert integrate_against(d, lambda z: np.cos(z) + 2, (-5, 5)) == pytest.approx(-4.0 * 3.0, abs=1e-14)
    assert integrate_against(d, np.cos, (1, 5)) == 0.0
    # int d(-tanh) over the line is -2
    assert integrate_against(neg_tanh(), lambda z: np.ones_like(z), (-40, 40)) == pytest.approx(-2.0, abs=1e-12)


def test_integrate_against_smooth_oracle():
    d = neg_tanh()
    oracle, _ = integrate.quad(lambda z: math.exp(-z * z) * -(1 / math.cosh(z)) ** 2, -20, 20, epsabs=1e-14)
    got = integrate_against(d, lambda z: np.exp(-z * z), (-20, 20))
    assert abs(got - oracle) < 1e-10


def test_integrate_against_rejects_nonfinite():
    with pytest.raises(InvalidIntegrand):
        integrate_against(two_level(-1, 1), lambda z: np.full(np.shape(z), np.nan), (-1, 1))


def test_asymptotic_limits():
    assert two_level(-1.0, 2.0).asymptotic_limits == (-1.0, 2.0)
    assert neg_tanh().asymptotic_limits == (-1.0, 1.0)
    assert BVDrift((), (Affine(1.0, 0.0),)).asymptotic_limits is None
    assert set(stationary_catalog()) == {"two_level", "neg_tanh", "tanh_jump", "tabulated"}


def test_records_round_trip():
    for d in catalog().values():
        rec = d.to_records()
        assert BVDrift.from_records(rec["breakpoints"], rec["segments"]) == d


def test_identical_neighbours_merge():
    d = BVDrift((0.0,), (Constant(1.0), Constant(1.0)))
    assert d.breakpoints == ()
    assert d.atoms()[0].size == 0


def test_kernel_is_a_probability_density():
    mass, _ = integrate.quad(lambda u: float(kernel(u)), -1, 1, epsabs=1e-14)
    assert mass == pytest.approx(1.0, abs=1e-13)
    assert float(kernel_cdf(-1.0)) == 0.0 and float(kernel_cdf(1.0)) == 1.0
    assert float(kernel_cdf(0.0)) == pytest.approx(0.5, abs=1e-15)


def test_mollified_value_matches_convolution():
    d = tanh_with_jump()
    md = mollify(d, 10)
    for x in (0.4, 0.5, 0.57, 2.0):
        oracle, _ = integrate.quad(lambda y: float(d.value(y)) * 10 * float(kernel(10 * (x - y))),
                                   x - 0.1, x + 0.1, points=[0.5], epsabs=1e-13)
        assert float(md.value(x)) == pytest.approx(oracle, abs=1e-10)


def test_mollified_is_smooth():
    md = mollify(two_level(-1, 1), 100)
    assert isinstance(md, MollifiedDrift) and md.is_smooth
    assert md.atoms()[0].size == 0
    assert float(md.value(0.02)) == -1.0 and float(md.value(-0.02)) == 1.0


@pytest.mark.parametrize("name", sorted(catalog()))
@pytest.mark.parametrize("n", [10, 100, 1000])
def test_mollification_keeps_sup_and_variation(name, n):
    d = catalog()[name]
    md = mollify(d, n)
    assert md.sup_abs() <= d.sup_abs() + 1e-12
    assert md.total_variation() <= d.total_variation() + 1e-9


@settings(max_examples=25, deadline=None)
@given(
    a=st.floats(-5, 5, allow_nan=False),
    b=st.floats(-5, 5, allow_nan=False),
    n=st.integers(1, 2000),
)
def test_mollified_two_level_property(a, b, n):
    d = two_level(a, b)
    md = mollify(d, n)
    xs = np.linspace(-2, 2, 101)
    vals = md.value(xs)
    lo, hi = min(a, b), max(a, b)
    assert np.all(vals >= lo - 1e-12) and np.all(vals <= hi + 1e-12)
    assert md.total_variation() <= abs(a - b) + 1e-9


@settings(max_examples=25, deadline=None)
@given(vals=st.lists(st.floats(-3, 3, allow_nan=False), min_size=3, max_size=6))
def test_tabulated_variation_bounds(vals):
    knots = tuple(float(k) for k in np.linspace(-1, 1, len(vals)))
    seg = Tabulated(knots, tuple(vals))
    d = BVDrift((), (seg,))
    tv = d.total_variation((-1.0, 1.0))
    # at least the variation of the knot values, and finite
    assert tv >= float(np.abs(np.diff(vals)).sum()) - 1e-9
    assert math.isfinite(tv)


def test_tanh_segment_limits():
    s = TanhScaled(-2.0, 3.0, 1.0, 0.5)
    assert s.limit(+1) == pytest.approx(-1.5)
    assert s.limit(-1) == pytest.approx(2.5)


@settings(max_examples=30, deadline=None)
@given(
    c1=st.lists(st.floats(-2, 2, allow_nan=False), min_size=1, max_size=4),
    c2=st.lists(st.floats(-2, 2, allow_nan=False), min_size=1, max_size=4),
    k=st.floats(-3, 3, allow_nan=False),
    name=st.sampled_from(sorted(catalog())),
)
def test_integrate_against_linear_and_bounded(c1, c2, k, name):
    d = catalog()[name]
    box = (-2.0, 2.0)
    f, g = np.polynomial.Polynomial(c1), np.polynomial.Polynomial(c2)
    If, Ig = integrate_against(d, f, box), integrate_against(d, g, box)
    both = integrate_against(d, lambda z: f(z) + k * g(z), box)
    assert both == pytest.approx(If + k * Ig, abs=1e-9 * (1 + abs(If) + abs(k * Ig)))
    sup = float(np.abs(f(np.linspace(*box, 4001))).max())
    # the grid sup can miss the true sup slightly; the polynomial's Lipschitz slack covers it
    slack = float(np.abs(f.deriv()(np.linspace(*box, 4001))).max()) * 1e-3
    assert abs(If) <= (sup + slack) * d.total_variation(box) + 1e-12


@pytest.mark.parametrize("name", sorted(catalog()))
def test_mollified_converges_pointwise(name):
    d = catalog()[name]
    xs = np.array([-1.7, -0.31, 0.23, 0.77, 1.9])
    xs = xs[np.min(np.abs(xs[:, None] - d.knots()[None, :]), axis=1, initial=np.inf) > 0.05] if d.knots().size else xs
    errs = [np.abs(mollify(d, n).value(xs) - d.value(xs)) for n in (10, 100, 1000)]
    for coarse, fine in zip(errs, errs[1:]):
        assert np.all((fine < coarse) | (fine <= 1e-14))


@pytest.mark.parametrize("name", sorted(stationary_catalog()))
def test_jordan_split(name):
    # positive and negative variation, each from atoms plus the density part
    d = catalog()[name]
    loc, w = d.atoms()
    pos, neg = float(w[w > 0].sum()), float(-w[w < 0].sum())
    edges = [-60.0, *d.knots(), 60.0]
    for lo, hi in zip(edges, edges[1:]):
        for sign in (1, -1):
            part, _ = integrate.quad(lambda z: max(sign * float(d.derivative(z)), 0.0), lo, hi, limit=200,
                                     epsabs=1e-13)
            if sign > 0:
                pos += part
            else:
                neg += part
    a, b = d.asymptotic_limits
    assert pos + neg == pytest.approx(d.total_variation(), abs=1e-9)
    assert pos - neg == pytest.approx(a - b, abs=1e-9)
