"""End-to-end acceptance checks.

One criterion per test, each printing a PASS/FAIL line; run with
`pytest tests/test_acceptance.py -v -s` to see the lines as they go.
Monte Carlo criteria draw ~10^5 records, so the module takes a couple
of minutes in total.
"""

import csv
import math
import time

import numpy as np
import pytest
from scipy.stats import beta

from noisespec import (
    FlatBandConfig,
    ModeGrid,
    SeedSpec,
    chernoff_homodyne,
    chernoff_homodyne_discrete,
    chernoff_low_snr,
    chernoff_uspc,
    chernoff_uspc_discrete,
    convexity_bound_gaussian,
    convexity_bound_object_size,
    error_prob_bounds,
    fisher_flat_closed_form,
    fisher_homodyne,
    fisher_low_snr,
    fisher_uspc_continuum,
    make_flat_band,
    mc_detection,
    mc_estimation,
    quantum_chernoff,
    quantum_fisher_bound,
)
from noisespec.cli import main
from conftest import random_configs

TWO_PI = 2.0 * math.pi


def report(number: int, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")


def test_criterion_01_flat_band_closed_forms():
    t0 = time.perf_counter()
    model, profile = make_flat_band(FlatBandConfig(band_hz=1.0))
    worst = 0.0
    for theta in (0.01, 0.1, 1.0, 10.0):
        ju_ref, jh_ref = fisher_flat_closed_form(theta, 1.0, 1.0)
        ju = fisher_uspc_continuum(model, profile, theta, 1.0).value
        jh = fisher_homodyne(model, profile, theta, 1.0).value
        worst = max(worst, abs(ju / ju_ref - 1.0), abs(jh / jh_ref - 1.0))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 1.0
    report(1, ok, f"flat-band quadrature vs closed forms, max rel err {worst:.2e}, {elapsed:.2f}s")
    assert worst <= 1e-9
    assert elapsed < 1.0


def test_criterion_02_uspc_reaches_quantum_information():
    t0 = time.perf_counter()
    worst = 0.0
    for model, profile, theta, duration in random_configs(100):
        k = quantum_fisher_bound(model, profile, theta, duration).value
        j = fisher_uspc_continuum(model, profile, theta, duration).value
        if k > 0.0:
            worst = max(worst, abs(j / k - 1.0))
        else:
            worst = max(worst, abs(j - k))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 10.0
    report(2, ok, f"100 configurations, max |J_uspc/K - 1| = {worst:.2e}, {elapsed:.1f}s")
    assert worst <= 1e-12
    assert elapsed < 10.0


def test_criterion_03_uspc_reaches_quantum_exponent():
    worst = 0.0
    for model, profile, theta, duration in random_configs(100):
        z = quantum_chernoff(model, profile, theta, duration).value
        x = chernoff_uspc(model, profile, theta, duration).value
        if z > 0.0:
            worst = max(worst, abs(x / z - 1.0))
        else:
            worst = max(worst, abs(x - z))
    ok = worst <= 1e-12
    report(3, ok, f"100 configurations, max |xi_uspc/zeta - 1| = {worst:.2e}")
    assert worst <= 1e-12


def test_criterion_04_unit_signal_exponents():
    model, profile = make_flat_band(FlatBandConfig(band_hz=1.0))
    xu = chernoff_uspc(model, profile, 1.0, 1.0)
    xh = chernoff_homodyne(model, profile, 1.0, 1.0)
    # stationary point of ln(1+(1-s)) - (1-s) ln 2 on [0, 1]
    s_star = 2.0 - 1.0 / math.log(2.0)
    f_star = -math.log(math.log(2.0)) - (1.0 - math.log(2.0))
    err_u = abs(xu.value / math.log(1.5) - 1.0)
    err_h = abs(xh.value - f_star)
    err_s = abs(xh.s_opt - s_star)
    ok = err_u <= 1e-9 and err_h <= 1e-6 and err_s <= 1e-6
    report(
        4,
        ok,
        f"xi_uspc rel err {err_u:.2e}; xi_hom abs err {err_h:.2e}; s_opt abs err {err_s:.2e}",
    )
    assert err_u <= 1e-9
    assert err_h <= 1e-6
    assert err_s <= 1e-6


def test_criterion_05_low_snr_limits():
    model, profile = make_flat_band(FlatBandConfig(band_hz=1.0))
    duration = 1.0
    levels = np.logspace(-4, -2, 5)
    worst = 0.0
    gaps = []
    for phi in levels:
        ju = fisher_uspc_continuum(model, profile, phi, duration).value
        jh = fisher_homodyne(model, profile, phi, duration).value
        ju_low, jh_low = fisher_low_snr(model, profile, phi, duration)
        xu = chernoff_uspc(model, profile, phi, duration).value
        xh = chernoff_homodyne(model, profile, phi, duration).value
        xu_low, xh_low = chernoff_low_snr(model, profile, phi, duration)
        for full, approx in (
            (ju, ju_low.value),
            (jh, jh_low.value),
            (xu, xu_low.value),
            (xh, xh_low.value),
        ):
            worst = max(worst, abs(approx / full - 1.0))
        gaps.append(xh / xu)
    slope = float(np.polyfit(np.log(levels), np.log(gaps), 1)[0])
    ok = worst <= 1e-3 and abs(slope - 2.0) <= 0.05
    report(5, ok, f"max approximation err {worst:.2e}; exponent-gap slope {slope:.4f}")
    assert worst <= 1e-3
    assert abs(slope - 2.0) <= 0.05


def test_criterion_06_count_detector_miss_rate():
    t0 = time.perf_counter()
    model, profile = make_flat_band(FlatBandConfig(band_hz=10.0))
    grid = ModeGrid.for_band(1.0, 10.0)
    trials = 100_000
    res = mc_detection(model, profile, grid, 1.0, trials, SeedSpec(20260819), method="uspc")
    p_miss = 1.5**-10
    tol = 3.0 * math.sqrt(p_miss * (1.0 - p_miss) / trials)
    err = abs(res.miss - p_miss)
    elapsed = time.perf_counter() - t0
    ok = res.false_alarm == 0.0 and err <= tol and elapsed < 30.0
    report(
        6,
        ok,
        f"miss {res.miss:.5f} vs exact {p_miss:.5f} (tol {tol:.1e}), "
        f"false alarms {res.false_alarm}, {elapsed:.1f}s",
    )
    assert res.false_alarm == 0.0
    assert err <= tol
    assert elapsed < 30.0


def test_criterion_07_mle_reaches_the_bound():
    t0 = time.perf_counter()
    model, profile = make_flat_band(FlatBandConfig(band_hz=1000.0))
    grid = ModeGrid.for_band(1.0, 1000.0)
    trials = 10_000
    effs = {}
    for method in ("uspc", "homodyne"):
        res = mc_estimation(
            model, profile, grid, 1.0, trials, SeedSpec(20260819), method=method
        )
        effs[method] = res.efficiency
    elapsed = time.perf_counter() - t0
    ok = all(0.9 <= e <= 1.1 for e in effs.values()) and elapsed < 300.0
    report(
        7,
        ok,
        f"MSE x information: uspc {effs['uspc']:.4f}, homodyne {effs['homodyne']:.4f}, "
        f"{elapsed:.0f}s",
    )
    for method, eff in effs.items():
        assert 0.9 <= eff <= 1.1, method
    assert elapsed < 300.0


def test_criterion_08_single_mode_convexity_bounds():
    got = convexity_bound_gaussian(lambda t: t * t, 1.0, 1.0, dvariance_fn=lambda t: 2.0 * t)

    # independent oracle: scan the auxiliary slope of the variational form
    v, dv, vk = 1.0, 2.0, 1.0
    dlog = dv / v
    slopes = np.linspace(-abs(dlog), abs(dlog), 20001)
    oracle = float(np.min(4.0 * vk * v * slopes**2 + (dlog - 2.0 * slopes) ** 2 / 2.0))

    uniform = convexity_bound_object_size(lambda z: 0.5 * np.ones_like(z), -1.0, 1.0, 0.25)
    norm = convexity_bound_object_size(
        lambda z: np.exp(-0.5 * z * z) / math.sqrt(TWO_PI), -40.0, 40.0, 2.0
    )
    point = convexity_bound_object_size(None, 0.0, 0.0, 3.0)

    err_g = abs(got - oracle)
    ok = (
        err_g <= 1e-6
        and got == pytest.approx(4.0 / 3.0, rel=1e-12)
        and uniform == pytest.approx(1.0 / 3.0, rel=1e-9)
        and norm == pytest.approx(8.0, rel=1e-9)
        and point == 0.0
    )
    report(
        8,
        ok,
        f"single-mode bound {got:.9f} vs grid oracle (err {err_g:.1e}); "
        f"object-size bounds {uniform:.6f}, {norm:.6f}, {point}",
    )
    assert err_g <= 1e-6
    assert got == pytest.approx(4.0 / 3.0, rel=1e-12)
    assert uniform == pytest.approx(1.0 / 3.0, rel=1e-9)
    assert norm == pytest.approx(8.0, rel=1e-9)
    assert point == 0.0


def test_criterion_09_homodyne_error_rate_inside_bracket():
    model, profile = make_flat_band(FlatBandConfig(band_hz=200.0))
    grid = ModeGrid.for_band(1.0, 200.0)
    trials = 100_000
    res = mc_detection(model, profile, grid, 1.0, trials, SeedSpec(20260819), method="homodyne")

    zeta = chernoff_uspc_discrete(model, profile, 1.0, grid).value
    xi = chernoff_homodyne_discrete(model, profile, 1.0, grid).value
    lower, upper = error_prob_bounds(math.exp(-0.5 * zeta), xi)

    # Exact-binomial 3-sigma interval on the pooled error count.  The
    # analytic bracket is far below Monte Carlo resolution here (upper
    # ~ 3e-6 at 2e5 records), so the sound check is consistency of the
    # interval with the bracket, not point membership.
    n = 2 * trials
    k = round(res.false_alarm * trials) + round(res.miss * trials)
    alpha = 0.0027
    ci_lo = 0.0 if k == 0 else float(beta.ppf(alpha / 2.0, k, n - k + 1))
    ci_hi = 1.0 if k == n else float(beta.ppf(1.0 - alpha / 2.0, k + 1, n - k))
    ok = ci_lo <= upper and ci_hi >= lower
    report(
        9,
        ok,
        f"{k} errors in {n} records, CI [{ci_lo:.2e}, {ci_hi:.2e}] vs "
        f"bracket [{lower:.2e}, {upper:.2e}]",
    )
    assert ci_lo <= upper
    assert ci_hi >= lower


SCAN_CONFIG = """\
[model]
kind = "flat-band"
band_hz = 1.0
theta = 1.0

[grid]
duration = 1.0

[scan]
start = 0.5
stop = 1.5
points = 3
"""

MC_CONFIG = """\
[model]
kind = "flat-band"
band_hz = 10.0

[grid]
duration = 1.0

[scan]
start = 1.0
stop = 1.0
points = 1

[run]
trials = 100
seed = 12
"""


def test_criterion_10_cli_runs_are_reproducible(tmp_path):
    scan_cfg = tmp_path / "scan.toml"
    scan_cfg.write_text(SCAN_CONFIG)
    mc_cfg = tmp_path / "mc.toml"
    mc_cfg.write_text(MC_CONFIG)
    jobs = {
        "fisher-scan": scan_cfg,
        "chernoff-scan": scan_cfg,
        "mc-estimate": mc_cfg,
        "mc-detect": mc_cfg,
        "spectra-dump": scan_cfg,
    }
    stable = []
    for name, cfg in jobs.items():
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{name}-{tag}.csv"
            code = main([name, "--config", str(cfg), "--out", str(out)])
            assert code == 0, name
            outs.append(out.read_bytes())
        with open(tmp_path / f"{name}-a.csv", newline="") as fh:
            assert len(list(csv.reader(fh))) > 1, name
        stable.append(outs[0] == outs[1])
    ok = all(stable)
    report(10, ok, f"byte-identical reruns for {sum(stable)}/5 subcommands")
    assert ok
