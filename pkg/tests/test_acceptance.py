"""Acceptance suite: one test per exit criterion, at its stated tolerance.

Run with ``pytest -s tests/test_acceptance.py`` to see the PASS line
each criterion prints on success.
"""

import math
import time

import numpy as np
import pytest

from offswitch.beliefs import Dirac, Gaussian, posterior_update
from offswitch.cli import FIGURE_FILES, main
from offswitch.designer import fig4_scenario, simulate
from offswitch.incentives import (
    RobotAction,
    boltzmann_grad_identity,
    delta,
    delta_decomposition,
    delta_monte_carlo,
    delta_rational_gaussian,
)
from offswitch.policies import Boltzmann, Rational, Tabular
from offswitch.sweeps import default_fig3_grid, run_sweep, zero_boundary

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
# Below this |mu|/sigma the incentive clears the float64 subnormal floor,
# so strict positivity is representable (true value > e^-744 at 38.6).
STRICT_REPRESENTABLE_Z = 38.0


def _ok(n: int, text: str) -> None:
    print(f"ACCEPTANCE {n} PASS: {text}")


@pytest.fixture(scope="module")
def fig3_slices():
    return {mu: run_sweep(default_fig3_grid(mu)) for mu in (-1.0, 0.0, 1.0)}


def test_criterion_1_closed_form_spot_value_and_oracle():
    start = time.perf_counter()
    closed = delta_rational_gaussian(0.0, 1.0).delta
    assert abs(closed - INV_SQRT_2PI) < 1e-9
    mc = delta_monte_carlo(Gaussian(0.0, 1.0), Rational(), 10_000_000, seed=2024)
    assert abs(mc.delta - closed) < 3.0 * mc.mc_stderr
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _ok(1, f"delta(0,1) = {closed:.8f} = 1/sqrt(2pi) within 1e-9; "
           f"Monte-Carlo within 3 stderr; {elapsed:.2f}s")


def test_criterion_2_rational_human_never_prefers_unilateral():
    rng = np.random.default_rng(20_17)
    strict_checked = 0
    for _ in range(1000):
        mu = rng.uniform(-3.0, 3.0)
        sigma = rng.uniform(np.nextafter(0.0, 1.0), 3.0)
        closed = delta_rational_gaussian(mu, sigma).delta
        assert closed >= 0.0
        if sigma >= 1e-3 and abs(mu) / sigma <= STRICT_REPRESENTABLE_Z:
            assert closed > 0.0
            strict_checked += 1
        quad = delta(Gaussian(mu, sigma), Rational()).delta
        assert abs(quad - closed) < 1e-6
    assert strict_checked > 900
    _ok(2, f"1000 random rational cases: delta >= 0, strict on {strict_checked} "
           "float-representable draws, quadrature = closed form within 1e-6")


def test_criterion_3_known_preferences_demand_a_rational_overseer():
    for beta in (0.1, 1.0, 10.0):
        for u in (-2.0, -0.5, 0.5, 2.0):
            report = delta(Dirac(u), Boltzmann(beta))
            assert report.delta < 0.0
    for u in (-2.0, -0.5, 0.0, 0.5, 2.0):
        report = delta(Dirac(u), Rational())
        assert report.delta == 0.0
        assert report.optimal is RobotAction.WAIT  # tie-break: wait is in the argmax set
    _ok(3, "point-mass beliefs: delta < 0 for every Boltzmann human, "
           "delta = 0 with Wait tied-optimal for the rational human")


def test_criterion_4_decomposition_consistency():
    mus = np.linspace(-2.0, 2.0, 20)
    sigmas = np.linspace(0.05, 3.0, 20)
    betas = np.logspace(-1.0, 1.0, 5)
    max_gap = 0.0
    max_identity_gap = 0.0
    classified = 0
    for mu in mus:
        for sigma in sigmas:
            for beta in betas:
                dec = delta_decomposition(mu, sigma, Boltzmann(beta))
                quad = delta(Gaussian(mu, sigma), Boltzmann(beta)).delta
                max_gap = max(max_gap, abs(dec.delta - quad))
                assert abs(dec.delta - quad) < 1e-6
                if abs(quad) > 1e-9:
                    # optimality inequality, rescaled by sigma^2
                    assert (dec.info_term > dec.correction_term) == (quad > 0.0)
                    classified += 1
                lhs, rhs = boltzmann_grad_identity(mu, sigma, beta)
                max_identity_gap = max(max_identity_gap, abs(lhs - rhs))
                assert abs(lhs - rhs) < 1e-6
    _ok(4, f"20x20x5 grid: |decomposition - quadrature| <= {max_gap:.2e}; "
           f"classification matched sign on {classified} off-band points; "
           f"gradient identity gap <= {max_identity_gap:.2e}")


def test_criterion_5_limits_symmetry_monotonicity_convergence():
    for mu in (-2.0, -1.0, 0.0, 1.0, 2.0):
        assert delta_rational_gaussian(mu, 0.0).delta == 0.0
        small = [delta_rational_gaussian(mu, s).delta for s in (1e-1, 1e-2, 1e-3)]
        assert all(b <= a for a, b in zip(small, small[1:]))
        assert small[-1] < 1e-3

    rng = np.random.default_rng(8)
    for _ in range(200):
        mu = rng.uniform(0.0, 3.0)
        sigma = rng.uniform(0.0, 3.0)
        assert delta_rational_gaussian(mu, sigma).delta == delta_rational_gaussian(-mu, sigma).delta

    for mu in (-1.0, 0.0, 1.0, 2.0):
        sigmas = np.linspace(0.05, 3.0, 60)
        in_range = sigmas[np.abs(mu) / sigmas <= STRICT_REPRESENTABLE_Z]
        deltas = [delta_rational_gaussian(mu, s).delta for s in in_range]
        assert all(b > a for a, b in zip(deltas, deltas[1:]))

    for mu in (-1.0, 0.0, 1.0):
        dec = delta_decomposition(mu, 1.0, Boltzmann(1e-4)).delta
        closed = delta_rational_gaussian(mu, 1.0).delta
        assert abs(dec - closed) < 1e-3
    _ok(5, "delta -> 0 as sigma -> 0, exact mu sign symmetry, strict growth in "
           "sigma, Boltzmann at beta=1e-4 within 1e-3 of the rational closed form")


def test_criterion_6_noisy_human_sign_structure(fig3_slices):
    zero_slice = fig3_slices[0.0]
    assert all(r.delta > 0.0 for r in zero_slice)
    assert all(r.optimal is RobotAction.WAIT for r in zero_slice)
    assert zero_boundary(zero_slice) == []

    for mu, off_action in ((-1.0, RobotAction.SWITCH_OFF), (1.0, RobotAction.ACT)):
        rows = fig3_slices[mu]
        sigmas = sorted({r.sigma for r in rows})
        betas = sorted({r.beta for r in rows})
        positive = [r for r in rows if r.delta > 0.0]
        negative = [r for r in rows if r.delta < 0.0]
        assert positive and negative
        assert all(r.optimal is off_action for r in negative)
        assert all(r.optimal is RobotAction.WAIT for r in positive)
        # high sigma + low beta defers; low sigma + high beta does not
        assert any(r.delta > 0 for r in rows if r.sigma == sigmas[-1] and r.beta == betas[0])
        assert any(r.delta < 0 for r in rows if r.sigma == sigmas[0] and r.beta == betas[-1])
        assert zero_boundary(rows)
    _ok(6, "mu=0 slice defers everywhere; mu=+-1 slices split into defer and "
           "act/shut-down regions with the expected fallback actions")


def test_criterion_7_negative_slope_implies_negative_incentive():
    decreasing = Tabular([-1.0, 1.0], [0.9, 0.1])
    rng = np.random.default_rng(31)
    for _ in range(100):
        mu = rng.uniform(-3.0, 3.0)
        sigma = rng.uniform(0.0, 2.5)
        if (mu, sigma) == (0.0, 0.0):
            continue
        report = delta_decomposition(mu, sigma, decreasing)
        # info term is <= 0 (exactly 0 when no representable mass sits
        # over the decreasing segment), never positive
        assert report.info_term <= 0.0
        assert report.delta < 0.0
    _ok(7, "decreasing tabular policy: delta < 0 on 100 random Gaussian beliefs")


def test_criterion_8_designer_value_peaks_at_true_posterior_width():
    scenario = fig4_scenario(n_actions=1, n_trials=200_000, seed=42)
    start = time.perf_counter()
    result = simulate(scenario, threads=1)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0

    stds = np.array([r.posterior_std for r in result.rows])
    values = np.array([r.v_mean for r in result.rows])
    assert len(stds) == 11
    assert stds[0] == pytest.approx(0.3, abs=1e-12)
    assert stds[-1] == pytest.approx(0.999, abs=1e-12)
    step = np.max(np.diff(stds))
    true_std = posterior_update(
        Gaussian(scenario.prior_mean, scenario.prior_std), 0.0, scenario.true_noise_std
    ).std
    assert true_std == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)
    best = stds[int(np.argmax(values))]
    assert abs(best - true_std) <= step + 1e-12

    deltas = [r.delta_mean for r in result.rows]
    errs = [r.delta_stderr for r in result.rows]
    for i in range(len(deltas) - 1):
        slack = 3.0 * math.hypot(errs[i], errs[i + 1])
        assert deltas[i + 1] >= deltas[i] - slack
    _ok(8, f"value argmax at posterior std {best:.4f} (true 0.7071, step {step:.4f}); "
           f"incentive non-decreasing in width; {elapsed:.1f}s single-threaded")


def test_criterion_9_more_actions_make_deference_dearer(figures_dir):
    import csv

    with open(figures_dir / "fig4_right.csv", newline="") as handle:
        rows = list(csv.DictReader(handle))
    runs = {}
    for row in rows:
        runs.setdefault(int(row["n_actions"]), []).append(
            (float(row["delta_mean"]), float(row["v_mean"]), float(row["v_stderr"]))
        )
    assert sorted(runs) == [1, 4, 16]

    def sacrifice(entries, tau):
        vmax, vmax_se = max((v, se) for _, v, se in entries)
        feasible = [(v, se) for d, v, se in entries if d >= tau]
        if not feasible:
            return None
        vbest, vbest_se = max(feasible)
        return vmax - vbest, math.hypot(vmax_se, vbest_se)

    lo = max(min(d for d, _, _ in entries) for entries in runs.values())
    hi = min(max(d for d, _, _ in entries) for entries in runs.values())
    assert lo < hi
    taus = np.linspace(lo, hi, 7)[1:-1]
    compared = 0
    for tau in taus:
        results = {n: sacrifice(runs[n], tau) for n in (1, 4, 16)}
        assert all(v is not None for v in results.values())
        for small, large in ((1, 4), (4, 16)):
            sac_s, se_s = results[small]
            sac_l, se_l = results[large]
            assert sac_l >= sac_s - 3.0 * math.hypot(se_s, se_l)
            compared += 1
    _ok(9, f"value sacrificed to reach an incentive floor is non-decreasing in the "
           f"action count across {compared} (tau, pair) comparisons")


def test_criterion_10_figure_artifacts_are_deterministic(figures_dir, tmp_path):
    run_b = tmp_path / "run_b"
    run_c = tmp_path / "run_c"
    assert main(["figures", "--outdir", str(run_b)]) == 0
    assert main(["figures", "--outdir", str(run_c), "--threads", "4"]) == 0
    for name in FIGURE_FILES:
        reference = (figures_dir / name).read_bytes()
        assert (run_b / name).read_bytes() == reference, f"{name} differs between runs"
        assert (run_c / name).read_bytes() == reference, f"{name} differs across thread counts"
    _ok(10, f"all {len(FIGURE_FILES)} CSVs byte-identical across reruns and 1- vs 4-thread execution")
