"""The acceptance suite, shared by ``bvflow verify`` and the test-suite.

Each ``criterion_N(protocol, seed)`` returns a :class:`CriterionResult`
whose ``details`` hold only JSON-friendly numbers, so a report is a pure
function of ``(protocol, seed)``. ``quick`` shortens horizons and path
counts and widens the tolerances accordingly.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import parallel
from .derivative import (
    _single_paths,
    derivative_via_local_time,
    finite_difference,
    local_time_derivatives,
    newton_leibniz_check,
    smooth_derivative,
)
from .drift import catalog, mollify, neg_tanh, two_level, zero_drift
from .flow import TimeGrid, make_noise, make_noise_batch, mollified_convergence_report, simulate_flow
from .local_time import occupation_estimate, occupation_profile, tanaka_estimate
from .lyapunov import empirical_lyapunov, ergodic_average_check, occupation_vs_stationary, seed_list
from .stationary import derivative_growth_rate, lyapunov_formula, stationary_density

PROTOCOLS = {
    "full": {
        "lyap_T": 200.0, "lyap_dt": 1e-3, "lyap_seeds": 20, "lyap_tol_ab": 0.1, "lyap_rel_ab2": 0.10,
        "lyap_tol_tanh": 0.05,
        "ks_T": 1000.0, "ks_tol": 0.02,
        "erg_T": 500.0, "erg_tol": 0.05,
        "lt_paths": 10_000, "lt_dt": 1e-4, "lt_rel": 0.03,
        "deriv_dt": 1e-5, "deriv_paths": 200,
        "nl_dt": 1e-4, "nl_paths": 100,
        "moll_paths": 1000, "moll_dt": 1e-4,
    },
    "quick": {
        "lyap_T": 50.0, "lyap_dt": 1e-3, "lyap_seeds": 5, "lyap_tol_ab": 0.2, "lyap_rel_ab2": 0.20,
        "lyap_tol_tanh": 0.1,
        "ks_T": 200.0, "ks_tol": 0.04,
        "erg_T": 100.0, "erg_tol": 0.1,
        "lt_paths": 2000, "lt_dt": 1e-4, "lt_rel": 0.06,
        "deriv_dt": 1e-5, "deriv_paths": 50,
        "nl_dt": 1e-4, "nl_paths": 20,
        "moll_paths": 256, "moll_dt": 1e-3,
    },
}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] criterion {self.number}: {self.title}"


def _f(x):
    return float(x)


def criterion_1(protocol="full", seed=0, target_shift=0.0, threads=1):
    """Two-level Lyapunov exponent against ``ab``."""
    p = PROTOCOLS[protocol]
    grid = TimeGrid(p["lyap_T"], p["lyap_dt"])
    seeds = seed_list(seed, p["lyap_seeds"])
    d = {}
    ok = True
    for a, b, tol in ((-1.0, 1.0, p["lyap_tol_ab"]), (-2.0, 3.0, None)):
        target = a * b + target_shift
        tol = abs(a * b) * p["lyap_rel_ab2"] if tol is None else tol
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = empirical_lyapunov(two_level(a, b), -0.5, 0.5, grid, seeds, threads=threads)
        hit = abs(res.mean - target) <= tol
        ok &= hit
        key = f"a={a:g},b={b:g}"
        d[key] = {"target": target, "tolerance": tol, "mean": res.mean, "stderr": res.stderr,
                  "excluded": res.excluded, "pass": bool(hit),
                  "derivative_growth_rate": derivative_growth_rate(stationary_density(two_level(a, b)))}
    return CriterionResult(1, "two-level Lyapunov exponent equals ab", bool(ok), d)


def tanh_formula_oracle():
    """``-int sech^4(z) / 4 dz`` by adaptive quadrature of the closed-form inner integral."""
    val, _ = integrate.quad(lambda z: -0.25 / math.cosh(z) ** 4, -40, 40, epsabs=1e-14, epsrel=1e-14, limit=200)
    return val


def criterion_2(protocol="full", seed=0, threads=1):
    """Formula and simulation for ``alpha = -tanh``."""
    p = PROTOCOLS[protocol]
    drift = neg_tanh()
    spec = stationary_density(drift)
    formula = lyapunov_formula(spec)
    oracle = tanh_formula_oracle()
    f_ok = abs(formula - oracle) <= 1e-10 and abs(formula + 1 / 3) <= 1e-10
    grid = TimeGrid(p["lyap_T"], p["lyap_dt"])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = empirical_lyapunov(drift, -0.5, 0.5, grid, seed_list(seed, p["lyap_seeds"]), threads=threads)
    e_ok = abs(res.mean - formula) <= p["lyap_tol_tanh"]
    d = {
        "formula": formula, "oracle": oracle, "formula_pass": bool(f_ok),
        "empirical_mean": res.mean, "stderr": res.stderr, "tolerance": p["lyap_tol_tanh"],
        "empirical_pass": bool(e_ok), "derivative_growth_rate": derivative_growth_rate(spec),
    }
    return CriterionResult(2, "tanh drift: formula -1/3 and empirical agreement", bool(f_ok and e_ok), d)


def criterion_3(protocol="full", seed=0):
    """Stationary density of the two-level drift."""
    p = PROTOCOLS[protocol]
    drift = two_level(-1.0, 1.0)
    closed = stationary_density(drift)
    general = stationary_density(drift, closed_form=False)
    ys = np.linspace(-4.0, 4.0, 100)
    pdf_err = float(np.max(np.abs(closed.density(ys) - general.density(ys))))
    cdf_err = float(np.max(np.abs(closed.cdf(ys) - general.cdf(ys))))
    shape_err = float(np.max(np.abs(closed.density(ys) - np.exp(-2 * np.abs(ys)))))
    occ = occupation_vs_stationary(drift, 0.0, TimeGrid(p["ks_T"], 1e-3), (seed, 0), bins=100, spec=closed)
    ok = max(pdf_err, cdf_err, shape_err) <= 1e-8 and occ.distance < p["ks_tol"]
    d = {"pdf_closed_vs_quadrature": pdf_err, "cdf_closed_vs_quadrature": cdf_err,
         "closed_vs_exp_minus_2abs": shape_err, "ks_distance": occ.distance, "ks_tolerance": p["ks_tol"]}
    return CriterionResult(3, "stationary density exp(-2|y|)", bool(ok), d)


def criterion_4(protocol="full", seed=0, target_shift=0.0):
    """Ergodic average of ``1{phi > 0} alpha(phi)``."""
    p = PROTOCOLS[protocol]
    drift = two_level(-1.0, 1.0)
    row = ergodic_average_check(drift, 0.0, [0.0], TimeGrid(p["erg_T"], 1e-3), (seed, 0))[0]
    target = -0.5 + target_shift
    ok = abs(row["empirical"] - target) <= p["erg_tol"] and abs(row["target"] + 0.5) <= 1e-10
    d = {"empirical": row["empirical"], "target": target, "formula": row["target"], "tolerance": p["erg_tol"]}
    return CriterionResult(4, "ergodic average at z=0 equals -1/2", bool(ok), d)


def _local_times(drift, n, dt, seed, threads):
    grid = TimeGrid(1.0, dt)

    def work(idx):
        noise = make_noise_batch(grid, seed, idx)
        traj = simulate_flow(drift, [0.0], grid, noise)
        return occupation_estimate(traj, 0, 0.0, 0.01), tanaka_estimate(traj, noise, drift, 0, 0.0)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        parts = parallel.map_ordered(work, parallel.chunks(n), threads)
    return np.concatenate([q[0] for q in parts]), np.concatenate([q[1] for q in parts])


def criterion_5(protocol="full", seed=0, threads=1):
    """``E L_0(1) = sqrt(2/pi)`` for zero drift; estimator agreement over the catalog."""
    p = PROTOCOLS[protocol]
    truth = math.sqrt(2 / math.pi)
    d = {"truth": truth}
    ok = True
    for name, drift in catalog().items():
        occ, tan = _local_times(drift, p["lt_paths"], p["lt_dt"], seed, threads)
        n = occ.size
        se = math.hypot(occ.std(ddof=1), tan.std(ddof=1)) / math.sqrt(n)
        gap = abs(occ.mean() - tan.mean())
        row = {"occupation": _f(occ.mean()), "tanaka": _f(tan.mean()), "combined_se": se,
               "agree_3se": bool(gap <= 3 * se)}
        ok &= row["agree_3se"]
        if name == "zero":
            row["occ_rel_err"] = _f(abs(occ.mean() / truth - 1))
            row["tanaka_rel_err"] = _f(abs(tan.mean() / truth - 1))
            ok &= row["occ_rel_err"] <= p["lt_rel"] and row["tanaka_rel_err"] <= p["lt_rel"]
        d[name] = row
    return CriterionResult(5, "local-time estimators: sqrt(2/pi) and mutual agreement", bool(ok), d)


def criterion_6(protocol="full", seed=0):
    """Derivative formula: identity for zero drift, contraction and FD agreement for two levels."""
    p = PROTOCOLS[protocol]
    zero = zero_drift()
    g0 = TimeGrid(1.0, 1e-3)
    noise0 = make_noise(g0, seed, 0)
    traj0 = simulate_flow(zero, [0.0], g0, noise0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        psi_lt = derivative_via_local_time(occupation_profile(traj0, 0, bandwidth=0.01), zero).value
    psi_sm = float(smooth_derivative(traj0, 0).value)
    psi_fd = finite_difference(zero, 0.0, 0.01, g0, noise0).value
    zero_ok = psi_lt == 1.0 and psi_sm == 1.0 and psi_fd == 1.0

    a, b = -1.0, 1.0
    drift = two_level(a, b)
    grid = TimeGrid(1.0, p["deriv_dt"])
    x, h = -0.1, 0.01
    ratios, lts, l0_gap = [], [], 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for idx in parallel.chunks(p["deriv_paths"], 50):
            noise = make_noise_batch(grid, seed, idx)
            traj = simulate_flow(drift, [x, x + h], grid, noise)
            fd = traj.gaps[:, 0] / (traj.initial_points[1] - traj.initial_points[0])
            lt = local_time_derivatives(traj, drift, 0.01)[:, 0]
            for q, single in enumerate(_single_paths(traj)):
                prof = occupation_profile(single, 0, bandwidth=0.01)
                l0_gap = max(l0_gap, abs(lt[q] - math.exp((a - b) * float(prof(0.0)))))
            ratios.append(fd / lt)
            lts.append(lt)
    ratios = np.concatenate(ratios)
    lts = np.concatenate(lts)
    contraction = bool(np.all(lts <= 1.0))
    mean_ratio = float(ratios.mean())
    ok = zero_ok and contraction and l0_gap <= 1e-12 and 0.9 <= mean_ratio <= 1.1
    d = {"zero_drift_psi": [psi_lt, psi_sm, psi_fd], "two_level_psi_le_1": contraction,
         "max_abs_psi_minus_exp_(a-b)L0": l0_gap, "mean_fd_over_lt": mean_ratio,
         "ratio_of_means": float(np.mean(ratios * lts) / lts.mean())}
    return CriterionResult(6, "derivative formula: identity, contraction, FD agreement", bool(ok), d)


def criterion_7(protocol="full", seed=0):
    """Newton-Leibniz identity for the two-level drift."""
    p = PROTOCOLS[protocol]
    grid = TimeGrid(1.0, p["nl_dt"])
    rels = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for idx in parallel.chunks(p["nl_paths"], 20):
            _, _, rel = newton_leibniz_check(two_level(-1.0, 1.0), -1.0, 1.0, grid,
                                             make_noise_batch(grid, seed, idx), 21)
            rels.append(rel)
    rels = np.concatenate(rels)
    med = float(np.median(rels))
    d = {"median_rel_error": med, "p90_rel_error": float(np.quantile(rels, 0.9)),
         "max_rel_error": float(rels.max()), "paths": int(rels.size)}
    return CriterionResult(7, "Newton-Leibniz identity, median error < 0.05", med < 0.05, d)


def criterion_8(protocol="full", seed=0, threads=1):
    """Mollification keeps sup and variation; coupled error shrinks with n."""
    p = PROTOCOLS[protocol]
    props = True
    worst = 0.0
    for drift in catalog().values():
        sup, var = drift.sup_abs(), drift.total_variation()
        for n in (10, 100, 1000):
            md = mollify(drift, n)
            s, v = md.sup_abs(), md.total_variation()
            worst = max(worst, s - sup, v - var)
            props &= s <= sup + 1e-12 and v <= var + 1e-9
    rows = mollified_convergence_report(two_level(-1.0, 1.0), 0.0, TimeGrid(1.0, p["moll_dt"]),
                                        [10, 100, 1000], p["moll_paths"], seed, threads)
    drop = _f(rows[0]["mean_abs"] / rows[-1]["mean_abs"])
    ok = props and drop >= 2.0
    d = {"sup_and_variation_preserved": bool(props), "worst_excess": worst,
         "mean_abs": {str(r["n"]): _f(r["mean_abs"]) for r in rows}, "drop_10_to_1000": drop}
    return CriterionResult(8, "mollification bounds and convergence", bool(ok), d)


def determinism_probe(seed, threads):
    """Bytes of a small multi-path computation; must not depend on ``threads``."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lyap = empirical_lyapunov(two_level(-1.0, 1.0), -0.5, 0.5, TimeGrid(10.0, 1e-3),
                                  seed_list(seed, 12), threads=threads)
    moll = mollified_convergence_report(two_level(-1.0, 1.0), 0.0, TimeGrid(0.5, 1e-3), [10, 100], 600,
                                        seed, threads)
    blob = {"lyap": [repr(v) for v in lyap.values], "moll": [[repr(v) for v in r.values()] for r in moll]}
    return json.dumps(blob, sort_keys=True).encode()


def criterion_9(protocol="full", seed=0):
    """Identical bytes for one and several worker threads, and on repetition."""
    runs = [determinism_probe(seed, t) for t in (1, 3, 1)]
    ok = runs[0] == runs[1] == runs[2]
    return CriterionResult(9, "determinism across repetitions and thread counts", bool(ok),
                           {"identical": bool(ok), "bytes": len(runs[0])})


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}
_THREADED = {1, 2, 5, 8}
_SHIFTABLE = {1, 4}  # --force-fail moves these targets out of reach


def run_suite(protocol="full", seed=0, threads=1, only=None, force_fail=False, echo=None):
    """Run criteria in order; ``echo`` receives each result line as it completes."""
    out = []
    for num, fn in CRITERIA.items():
        if only is not None and num not in only:
            continue
        kwargs = {"protocol": protocol, "seed": seed}
        if num in _THREADED:
            kwargs["threads"] = threads
        if num in _SHIFTABLE and force_fail:
            kwargs["target_shift"] = 1000.0
        res = fn(**kwargs)
        out.append(res)
        if echo is not None:
            echo(res.line())
    return out


def report_json(results, protocol, seed):
    return {
        "protocol": protocol,
        "seed": seed,
        "tolerances": PROTOCOLS[protocol],
        "criteria": [{"number": r.number, "title": r.title, "pass": r.passed, "details": r.details}
                     for r in results],
        "all_pass": all(r.passed for r in results),
    }
