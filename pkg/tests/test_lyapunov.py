import math
import warnings

import numpy as np
import pytest

from bvflow.drift import Affine, BVDrift, neg_tanh, two_level, zero_drift
from bvflow.errors import ConfigurationUnstable
from bvflow.flow import TimeGrid
from bvflow.lyapunov import (
    default_floor,
    empirical_lyapunov,
    ergodic_average_check,
    occupation_vs_stationary,
    seed_list,
)
from bvflow.stationary import derivative_growth_rate, stationary_density

pytestmark = pytest.mark.filterwarnings("ignore:horizon")

CONTRACT = BVDrift((), (Affine(-50.0, 0.0),))
# Euler contracts every gap by exactly (1 - 50 dt) per step
CONTRACT_RATE = math.log1p(-50 * 1e-3) / 1e-3


def test_default_floor():
    assert default_floor(two_level(-1, 1), 1e-3) == pytest.approx(math.sqrt(1e-3))
    assert default_floor(two_level(-1, 1), 0.1) == pytest.approx(0.8)
    assert default_floor(zero_drift(), 1e-3) == 1e-3


def test_seed_list():
    assert seed_list(7, 3) == [(7, 0), (7, 1), (7, 2)]


@pytest.mark.parametrize("drift", [two_level(-1.0, 1.0), neg_tanh()], ids=["two_level", "neg_tanh"])
def test_matches_ergodic_growth_rate(drift):
    res = empirical_lyapunov(drift, -0.5, 0.5, TimeGrid(100, 1e-3), seed_list(3, 16))
    target = derivative_growth_rate(stationary_density(drift))
    assert res.excluded == 0
    assert abs(res.mean / target - 1) < 0.1


def test_renormalised_exact_for_linear_contraction():
    res = empirical_lyapunov(CONTRACT, -0.5, 0.5, TimeGrid(20, 1e-3), seed_list(0, 2), floor=0.01)
    assert all(r.status == "ok" and r.renormalizations > 0 for r in res.runs)
    assert res.mean == pytest.approx(CONTRACT_RATE, rel=1e-9)


def test_naive_run_clamps():
    res = empirical_lyapunov(CONTRACT, -0.5, 0.5, TimeGrid(20, 1e-3), seed_list(0, 2), renormalize=False,
                             checkpoint_every=10)
    assert all(r.status == "clamped" for r in res.runs)
    # the last resolvable checkpoints lose some digits to cancellation in (pos + d) - pos
    assert abs(res.mean / CONTRACT_RATE - 1) < 0.01


def test_naive_two_level_breaches():
    with pytest.raises(ConfigurationUnstable):
        empirical_lyapunov(two_level(-1, 1), -0.5, 0.5, TimeGrid(20, 1e-3), seed_list(3, 8), renormalize=False)


def test_run_bookkeeping():
    res = empirical_lyapunov(two_level(-1, 1), -0.5, 0.5, TimeGrid(10, 1e-3), [4, 5])
    assert [r.seed for r in res.runs] == [(4, 0), (5, 0)]
    for r in res.runs:
        assert r.r[0] == 0.0 and r.times[-1] == pytest.approx(10.0)
        assert np.all(np.isfinite(r.r))
    assert res.values.size == 2


def test_short_horizon_warns():
    with pytest.warns(UserWarning, match="horizon"):
        empirical_lyapunov(neg_tanh(), -0.5, 0.5, TimeGrid(5, 1e-3), [0])


def test_validation():
    g = TimeGrid(5, 1e-3)
    with pytest.raises(ValueError):
        empirical_lyapunov(neg_tanh(), 0.5, -0.5, g, [0])
    with pytest.raises(ValueError):
        empirical_lyapunov(neg_tanh(), -0.5, 0.5, g, [])
    with pytest.raises(ValueError):
        empirical_lyapunov(neg_tanh(), -0.5, 0.5, g, [0], floor=2.0)


def test_thread_invariance():
    g = TimeGrid(20, 1e-3)
    a = empirical_lyapunov(two_level(-1, 1), -0.5, 0.5, g, seed_list(2, 20), threads=1)
    b = empirical_lyapunov(two_level(-1, 1), -0.5, 0.5, g, seed_list(2, 20), threads=3)
    assert np.array_equal(a.values, b.values)
    assert all(np.array_equal(x.r, y.r) for x, y in zip(a.runs, b.runs))


def test_stderr_shrinks_with_seeds():
    g = TimeGrid(50, 1e-3)
    few = empirical_lyapunov(two_level(-1, 1), -0.5, 0.5, g, seed_list(1, 8))
    many = empirical_lyapunov(two_level(-1, 1), -0.5, 0.5, g, seed_list(1, 32))
    # four times the seeds halves the standard error, up to sampling noise
    assert 1.0 < few.stderr / many.stderr < 3.0


@pytest.fixture(scope="module")
def ergodic_rows():
    d = two_level(-1, 1)
    spec = stationary_density(d)
    return [ergodic_average_check(d, 0.0, [-math.inf, 0.0, 1.0, 1e6], TimeGrid(200, 1e-3), s, spec=spec)
            for s in range(4)]


def test_ergodic_targets(ergodic_rows):
    rows = ergodic_rows[0]
    assert [r["z"] for r in rows] == [-math.inf, 0.0, 1.0, 1e6]
    assert rows[0]["target"] == pytest.approx(0.0, abs=1e-12)
    assert rows[1]["target"] == pytest.approx(-0.5, abs=1e-12)
    assert rows[2]["target"] == pytest.approx(-0.5 * math.exp(-2), rel=1e-10)
    assert rows[3]["empirical"] == 0.0 and rows[3]["target"] == 0.0


def test_ergodic_averages_converge(ergodic_rows):
    for j in range(3):
        emp = np.array([rows[j]["empirical"] for rows in ergodic_rows])
        assert abs(emp.mean() - ergodic_rows[0][j]["target"]) < 0.05


def test_occupation_vs_stationary():
    d = two_level(-1, 1)
    spec = stationary_density(d)
    g = TimeGrid(200, 1e-3)
    dists = []
    for s in range(4):
        oc = occupation_vs_stationary(d, 0.0, g, s, spec=spec)
        assert oc.n_samples == g.n_steps - math.ceil(0.05 * g.n_steps)
        assert np.sum(oc.empirical * np.diff(oc.edges)) == pytest.approx(1.0)
        dists.append(oc.distance)
    assert np.mean(dists) < 0.05
    one = occupation_vs_stationary(d, 0.0, g, 0, bins=1, spec=spec)
    assert one.distance == dists[0] and 0 <= one.distance <= 1
    assert one.empirical.size == 1


def test_window_vs_naive_deterministic_part():
    # r(t) = ln(x2 - x1) + rate t exactly, so the window removes ln(x2 - x1) / T
    x1, x2, T = 0.0, 0.2, 20.0
    res = empirical_lyapunov(CONTRACT, x1, x2, TimeGrid(T, 1e-3), [0], floor=0.01)
    run = res.runs[0]
    gap = abs(run.estimate - run.naive)
    assert gap == pytest.approx(abs(math.log(x2 - x1)) / T, rel=1e-6)
    assert gap <= abs(math.log(x2 - x1)) / (T / 2)


@pytest.mark.slow
def test_tanh_occupation_matches_sech2():
    oc = occupation_vs_stationary(neg_tanh(), 0.0, TimeGrid(1000, 1e-3), 0)
    assert oc.distance < 0.03


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="the z=-inf average is (phi_T - x - w_T)/T up to burn-in, whose spread "
                   "at T=500 is about 0.047; seed 0 lands at 0.057, so a 0.05 band is roughly one sigma")
def test_ergodic_full_line_seed0():
    row = ergodic_average_check(two_level(-1, 1), 0.0, [-math.inf], TimeGrid(500, 1e-3), 0)[0]
    assert row["abs_error"] < 0.05
