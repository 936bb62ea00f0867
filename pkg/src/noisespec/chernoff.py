"""Error exponents for detecting the presence of the noise spectrum.

Hypotheses: H0 has no displacement noise, H1 has S_X(omega | theta).
Continuum exponents have the form

    xi = (duration / 2) * integral( integrand(omega) d omega / 2 pi )

over the support of S_X; discrete ones are sums over the modes of a
ModeGrid.  All ln(1 + x) terms use log1p so that exponents of order
1e-17 survive in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import QuadratureSpec, integrate, maximize_1d
from .spectra import TWO_PI, NoiseSpectrumModel, ProbeProfile
from .fisher import _check_duration, _merge_breakpoints


@dataclass(frozen=True)
class ExponentReport:
    """Chernoff-type error exponent plus how it was obtained."""

    value: float
    method: str
    duration: float
    s_opt: float | None = None
    quad_error: float | None = None
    mode_count: int | None = None
    used_grid_fallback: bool = False


def _half_band_integral(integrand, model, profile, duration, spec):
    lo, hi = model.support
    res = integrate(integrand, lo, hi, spec, breakpoints=_merge_breakpoints(model, profile))
    scale = duration / (2.0 * TWO_PI)
    return scale * res.value, scale * res.error_bound


def quantum_chernoff(
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta: float,
    duration: float,
    spec: QuadratureSpec | None = None,
) -> ExponentReport:
    """Best exponent any readout permits: (T/2) int ln(1 + 2 S_k S_X) dw/2pi."""
    duration = _check_duration(duration)

    def integrand(w):
        sx = np.asarray(model.psd(w, theta), dtype=float)
        sk = np.asarray(profile.probe_psd(w), dtype=float)
        out = np.log1p(2.0 * sk * sx)
        return out if out.ndim else float(out)

    value, err = _half_band_integral(integrand, model, profile, duration, spec)
    return ExponentReport(value, "quantum", duration, quad_error=err)


def chernoff_uspc(
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta: float,
    duration: float,
    spec: QuadratureSpec | None = None,
) -> ExponentReport:
    """Photon-counting exponent, via the mode occupancy nbar = 2 S_k S_X.

    The likelihood-ratio endpoint gives (T/2) int ln(1 + nbar) dw/2pi,
    which saturates the quantum exponent.
    """
    duration = _check_duration(duration)

    def integrand(w):
        nbar = 2.0 * np.asarray(profile.probe_psd(w), dtype=float) * np.asarray(
            model.psd(w, theta), dtype=float
        )
        out = np.log1p(nbar)
        return out if out.ndim else float(out)

    value, err = _half_band_integral(integrand, model, profile, duration, spec)
    return ExponentReport(value, "uspc-continuum", duration, quad_error=err)


def chernoff_uspc_discrete(
    model: NoiseSpectrumModel, profile: ProbeProfile, theta: float, grid
) -> ExponentReport:
    """Sum of ln(1 + nbar_m) over grid modes.

    exp(-value) is also the exact miss probability of the
    any-photon-decides-H1 test.
    """
    w = grid.frequencies
    nbar = 2.0 * np.asarray(profile.probe_psd(w), dtype=float) * np.asarray(
        model.psd(w, theta), dtype=float
    )
    value = float(np.sum(np.log1p(nbar)))
    return ExponentReport(value, "uspc-discrete", grid.duration, mode_count=grid.mode_count)


def _homodyne_mode_exponent(rho, s: float):
    """Per-mode exponent ln(1 + (1-s) rho) - (1-s) ln(1 + rho) at SNR rho."""
    return np.log1p((1.0 - s) * rho) - (1.0 - s) * np.log1p(rho)


def chernoff_homodyne(
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta: float,
    duration: float,
    spec: QuadratureSpec | None = None,
    opt_tol: float = 1e-10,
) -> ExponentReport:
    """Homodyne exponent: the s in [0, 1] maximizing the integrated objective.

    The frequency integral is evaluated first for each s, then the
    scalar objective is maximized.  rho = S_X / S_eta = 4 S_k S_X is
    the spectral SNR.
    """
    duration = _check_duration(duration)

    def evaluate(s: float) -> tuple[float, float]:
        def integrand(w):
            sx = np.asarray(model.psd(w, theta), dtype=float)
            sk = np.asarray(profile.probe_psd(w), dtype=float)
            out = _homodyne_mode_exponent(4.0 * sk * sx, s)
            return out if out.ndim else float(out)

        return _half_band_integral(integrand, model, profile, duration, spec)

    best = maximize_1d(lambda s: evaluate(s)[0], 0.0, 1.0, tol=opt_tol)
    _, err = evaluate(best.x)
    return ExponentReport(
        best.value,
        "homodyne-continuum",
        duration,
        s_opt=best.x,
        quad_error=err,
        used_grid_fallback=best.used_grid_fallback,
    )


def chernoff_homodyne_discrete(
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta: float,
    grid,
    opt_tol: float = 1e-10,
) -> ExponentReport:
    """Discrete-mode homodyne exponent on grid, maximized over s."""
    w = grid.frequencies
    rho = 4.0 * np.asarray(profile.probe_psd(w), dtype=float) * np.asarray(
        model.psd(w, theta), dtype=float
    )

    def objective(s: float) -> float:
        return float(np.sum(_homodyne_mode_exponent(rho, s)))

    best = maximize_1d(objective, 0.0, 1.0, tol=opt_tol)
    return ExponentReport(
        best.value,
        "homodyne-discrete",
        grid.duration,
        s_opt=best.x,
        mode_count=grid.mode_count,
        used_grid_fallback=best.used_grid_fallback,
    )


def chernoff_low_snr(
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta: float,
    duration: float,
    spec: QuadratureSpec | None = None,
) -> tuple[ExponentReport, ExponentReport]:
    """Leading-order exponents for S_k S_X << 1: (photon counting, homodyne).

    Photon counting keeps the full linear term T int S_k S_X dw/2pi
    (optimum at the s -> 1 endpoint); homodyne is quadratic,
    T int (S_k S_X)^2 dw/2pi, from s = 1/2.
    """
    duration = _check_duration(duration)

    def integrand_uspc(w):
        out = np.asarray(profile.probe_psd(w) * model.psd(w, theta), dtype=float)
        return out if out.ndim else float(out)

    def integrand_hom(w):
        out = np.asarray(profile.probe_psd(w) * model.psd(w, theta), dtype=float) ** 2
        return out if out.ndim else float(out)

    lo, hi = model.support
    pts = _merge_breakpoints(model, profile)
    scale = duration / TWO_PI
    res_u = integrate(integrand_uspc, lo, hi, spec, breakpoints=pts)
    res_h = integrate(integrand_hom, lo, hi, spec, breakpoints=pts)
    return (
        ExponentReport(
            scale * res_u.value,
            "uspc-low-snr",
            duration,
            s_opt=1.0,
            quad_error=scale * res_u.error_bound,
        ),
        ExponentReport(
            scale * res_h.value,
            "homodyne-low-snr",
            duration,
            s_opt=0.5,
            quad_error=scale * res_h.error_bound,
        ),
    )


def error_prob_bounds(overlap: float, exponent: float) -> tuple[float, float]:
    """Equal-prior error-probability bracket from an overlap and an exponent.

    lower = (1 - sqrt(1 - overlap^2)) / 2, computed in a form stable
    for overlap << 1; upper = exp(-exponent) / 2.
    """
    overlap = float(overlap)
    exponent = float(exponent)
    if not (0.0 <= overlap <= 1.0):
        raise ValueError("overlap must lie in [0, 1]")
    if not (exponent >= 0.0):
        raise ValueError("exponent must be nonnegative")
    lower = 0.5 * overlap * overlap / (1.0 + math.sqrt(max(0.0, 1.0 - overlap * overlap)))
    upper = 0.5 * math.exp(-exponent)
    return lower, upper


def fidelity_uspc(
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta: float,
    duration: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """State-overlap upper bound exp(-zeta/2) between the two hypotheses."""
    zeta = quantum_chernoff(model, profile, theta, duration, spec).value
    return math.exp(-0.5 * zeta)
