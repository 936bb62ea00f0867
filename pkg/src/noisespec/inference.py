"""Likelihoods, maximum-likelihood estimation and Monte Carlo harnesses.

Estimation is 1-d in the spectrum amplitude theta.  The photon-count
likelihood is the product of thermal mode laws; the homodyne
periodogram likelihood is the Whittle product of exponentials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chernoff import chernoff_homodyne_discrete, chernoff_uspc_discrete
from .fisher import fisher_homodyne_discrete, fisher_uspc_discrete
from .numerics import maximize_1d
from .simulate import (
    ModeGrid,
    SeedSpec,
    sample_homodyne_periodogram,
    sample_uspc_counts,
)
from .spectra import NoiseSpectrumModel, ProbeProfile

METHODS = ("uspc", "homodyne")


def _default_bracket(theta_true: float) -> tuple[float, float]:
    return (0.0, 10.0 * max(float(theta_true), 1.0))


def loglik_uspc(
    counts: np.ndarray,
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta: float,
    grid: ModeGrid,
) -> float:
    """Log likelihood of per-mode photon counts at amplitude theta.

    Modes with zero predicted occupancy contribute 0 for a zero count
    and -inf otherwise.
    """
    counts = np.asarray(counts)
    if counts.shape != (grid.mode_count,):
        raise ValueError("counts do not match the grid")
    if np.any(counts < 0):
        raise ValueError("counts must be nonnegative")
    nbar = 2.0 * np.asarray(profile.probe_psd(grid.frequencies), dtype=float) * np.asarray(
        model.psd(grid.frequencies, theta), dtype=float
    )
    pos = nbar > 0.0
    if np.any(~pos & (counts > 0)):
        return -math.inf
    n = counts[pos].astype(float)
    nb = nbar[pos]
    return float(np.sum(n * (np.log(nb) - np.log1p(nb)) - np.log1p(nb)))


def loglik_homodyne(
    periodogram: np.ndarray,
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta: float,
    grid: ModeGrid,
) -> float:
    """Whittle log likelihood of per-mode periodogram values."""
    vals = np.asarray(periodogram, dtype=float)
    if vals.shape != (grid.mode_count,):
        raise ValueError("periodogram does not match the grid")
    if np.any(vals < 0.0):
        raise ValueError("periodogram values must be nonnegative")
    mu = np.asarray(profile.phase_psd(grid.frequencies), dtype=float) + np.asarray(
        model.psd(grid.frequencies, theta), dtype=float
    )
    return float(np.sum(-np.log(mu) - vals / mu))


@dataclass(frozen=True)
class MleResult:
    theta: float
    loglik: float
    at_boundary: bool
    used_grid_fallback: bool


def _maximize_loglik(objective, bracket, tol) -> MleResult:
    lo, hi = bracket
    if not (lo < hi):
        raise ValueError("bracket must have positive width")
    best = maximize_1d(objective, lo, hi, tol=tol)
    at_boundary = best.x == lo or best.x == hi
    return MleResult(best.x, best.value, at_boundary, best.used_grid_fallback)


def mle_uspc(
    counts: np.ndarray,
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    grid: ModeGrid,
    bracket: tuple[float, float] = (0.0, 10.0),
    tol: float = 1e-10,
) -> MleResult:
    """Maximize the photon-count likelihood over theta in bracket.

    An all-zero count record has a decreasing likelihood, so the lower
    bracket edge comes back flagged at_boundary.
    """
    return _maximize_loglik(
        lambda th: loglik_uspc(counts, model, profile, th, grid), bracket, tol
    )


def mle_homodyne(
    periodogram: np.ndarray,
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    grid: ModeGrid,
    bracket: tuple[float, float] = (0.0, 10.0),
    tol: float = 1e-10,
) -> MleResult:
    """Maximize the Whittle likelihood over theta in bracket."""
    return _maximize_loglik(
        lambda th: loglik_homodyne(periodogram, model, profile, th, grid), bracket, tol
    )


def lrt_detect_uspc(counts: np.ndarray) -> tuple[bool, int]:
    """Decide H1 iff any photon arrived; returns (decision, total count).

    Under H0 no mode is occupied, so the test never false-alarms and
    its miss probability is exactly exp(-sum ln(1 + nbar_m)).
    """
    counts = np.asarray(counts)
    total = int(np.sum(counts))
    return total > 0, total


def lrt_detect_homodyne(
    periodogram: np.ndarray,
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta_alt: float,
    grid: ModeGrid,
    threshold: float = 0.0,
) -> tuple[bool, float]:
    """Likelihood-ratio test of H1: S_X(. | theta_alt) against H0: no noise.

    Returns (decision, statistic); threshold 0 is the equal-priors
    Bayes test.
    """
    vals = np.asarray(periodogram, dtype=float)
    seta = np.asarray(profile.phase_psd(grid.frequencies), dtype=float)
    sx = np.asarray(model.psd(grid.frequencies, theta_alt), dtype=float)
    mu1 = seta + sx
    stat = float(np.sum(vals * (1.0 / seta - 1.0 / mu1) - np.log1p(sx / seta)))
    return stat >= threshold, stat


@dataclass(frozen=True)
class McEstimationResult:
    method: str
    theta_true: float
    trials: int
    mse: float
    mse_stderr: float | None
    crb: float
    """Inverse of the discrete-mode Fisher information at theta_true."""

    @property
    def efficiency(self) -> float:
        """MSE times the discrete information; 1 for an efficient estimator."""
        return self.mse / self.crb


def _jackknife_stderr(errors: np.ndarray) -> float | None:
    n = errors.size
    if n < 2:
        return None
    total = float(np.sum(errors))
    loo = (total - errors) / (n - 1)
    return float(np.sqrt((n - 1) / n * np.sum((loo - np.mean(loo)) ** 2)))


def mc_estimation(
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    grid: ModeGrid,
    theta_true: float,
    trials: int,
    seeds: SeedSpec,
    method: str = "uspc",
    bracket: tuple[float, float] | None = None,
    tol: float = 1e-10,
) -> McEstimationResult:
    """Monte Carlo mean-squared error of the MLE against the discrete CRB.

    Each trial draws its record from a stream keyed on the trial index,
    so results do not depend on execution order.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    bracket = bracket if bracket is not None else _default_bracket(theta_true)

    errors = np.empty(trials)
    for trial in range(trials):
        rng = seeds.rng(f"mc-est-{method}", trial)
        if method == "uspc":
            counts = sample_uspc_counts(model, profile, theta_true, grid, rng)
            fit = mle_uspc(counts, model, profile, grid, bracket=bracket, tol=tol)
        else:
            vals = sample_homodyne_periodogram(model, profile, theta_true, grid, rng)
            fit = mle_homodyne(vals, model, profile, grid, bracket=bracket, tol=tol)
        errors[trial] = (fit.theta - theta_true) ** 2

    if method == "uspc":
        info = fisher_uspc_discrete(model, profile, theta_true, grid)
    else:
        info = fisher_homodyne_discrete(model, profile, theta_true, grid)
    if info.value <= 0.0:
        raise ValueError("discrete Fisher information vanishes at theta_true")
    return McEstimationResult(
        method=method,
        theta_true=float(theta_true),
        trials=trials,
        mse=float(np.mean(errors)),
        mse_stderr=_jackknife_stderr(errors),
        crb=1.0 / info.value,
    )


@dataclass(frozen=True)
class McDetectionResult:
    method: str
    theta_alt: float
    trials: int
    false_alarm: float
    false_alarm_stderr: float
    miss: float
    miss_stderr: float
    exponent_ref: float
    """Matching discrete-mode Chernoff exponent for this method."""

    @property
    def p_error(self) -> float:
        """Equal-priors error probability (false_alarm + miss) / 2."""
        return 0.5 * (self.false_alarm + self.miss)


def _binom_stderr(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


def mc_detection(
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    grid: ModeGrid,
    theta_alt: float,
    trials: int,
    seeds: SeedSpec,
    method: str = "uspc",
    threshold: float = 0.0,
) -> McDetectionResult:
    """Monte Carlo error probabilities of the likelihood-ratio detectors.

    trials records are drawn under each hypothesis.  The photon-count
    detector cannot false-alarm; its empirical miss rate is compared
    downstream with the exact value exp(-exponent_ref).
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    theta_alt = float(theta_alt)

    false_alarms = 0
    misses = 0
    for trial in range(trials):
        rng0 = seeds.rng(f"mc-det-{method}-h0", trial)
        rng1 = seeds.rng(f"mc-det-{method}-h1", trial)
        if method == "uspc":
            c0 = sample_uspc_counts(model, profile, 0.0, grid, rng0)
            c1 = sample_uspc_counts(model, profile, theta_alt, grid, rng1)
            d0, _ = lrt_detect_uspc(c0)
            d1, _ = lrt_detect_uspc(c1)
        else:
            v0 = sample_homodyne_periodogram(model, profile, 0.0, grid, rng0)
            v1 = sample_homodyne_periodogram(model, profile, theta_alt, grid, rng1)
            d0, _ = lrt_detect_homodyne(v0, model, profile, theta_alt, grid, threshold)
            d1, _ = lrt_detect_homodyne(v1, model, profile, theta_alt, grid, threshold)
        false_alarms += int(d0)
        misses += int(not d1)

    if method == "uspc":
        ref = chernoff_uspc_discrete(model, profile, theta_alt, grid).value
    else:
        ref = chernoff_homodyne_discrete(model, profile, theta_alt, grid).value
    fa = false_alarms / trials
    miss = misses / trials
    return McDetectionResult(
        method=method,
        theta_alt=theta_alt,
        trials=trials,
        false_alarm=fa,
        false_alarm_stderr=_binom_stderr(fa, trials),
        miss=miss,
        miss_stderr=_binom_stderr(miss, trials),
        exponent_ref=ref,
    )
