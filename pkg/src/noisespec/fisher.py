"""Fisher-information limits for estimating the noise-spectrum amplitude.

Continuum quantities have the form

    J = duration * integral( integrand(omega) d omega / 2 pi )

taken over the support of the noise spectrum; discrete quantities are
sums over the positive-frequency modes of a ModeGrid.  Larger is
better: reports are in units of 1/theta^2 per measurement record.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .numerics import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    central_difference,
    integrate,
)
from .spectra import MAGNITUDE_SQUARED, TWO_PI, NoiseSpectrumModel, ProbeProfile


@dataclass(frozen=True)
class InfoReport:
    """Fisher-information value plus how it was obtained."""

    value: float
    method: str
    duration: float
    quad_error: float | None = None
    mode_count: int | None = None


def _merge_breakpoints(model: NoiseSpectrumModel, profile: ProbeProfile):
    pts: list[float] = []
    if model.breakpoints:
        pts.extend(model.breakpoints)
    if profile.breakpoints:
        pts.extend(profile.breakpoints)
    return pts or None


def _band_integral(integrand, model, profile, duration, spec) -> tuple[float, float]:
    lo, hi = model.support
    res = integrate(integrand, lo, hi, spec, breakpoints=_merge_breakpoints(model, profile))
    scale = duration / TWO_PI
    return scale * res.value, scale * res.error_bound


def _check_duration(duration: float) -> float:
    duration = float(duration)
    if not (duration > 0.0 and math.isfinite(duration)):
        raise ValueError("duration must be positive and finite")
    return duration


def quantum_bound_integrand(
    model: NoiseSpectrumModel, profile: ProbeProfile, theta: float
) -> Callable:
    """Integrand of the measurement-independent information bound.

    Equals (dlog S_X)^2 / (2 + 1/(S_k S_X)), written so that points
    with S_X = 0 (where dS_X = 0 too) contribute zero and the theta=0
    member of a magnitude-squared family keeps its finite limit.
    """
    if model.kind == MAGNITUDE_SQUARED:
        theta2 = float(theta) ** 2

        def integrand(w):
            g = np.asarray(profile.probe_psd(w) * model.shape(w), dtype=float)
            out = 4.0 * g / (1.0 + 2.0 * theta2 * g)
            return out if out.ndim else float(out)

        return integrand

    def integrand(w):
        sx = np.asarray(model.psd(w, theta), dtype=float)
        dsx = np.asarray(model.dpsd_dtheta(w, theta), dtype=float)
        sk = np.asarray(profile.probe_psd(w), dtype=float)
        num = dsx * dsx * sk
        den = 2.0 * sk * sx * sx + sx
        out = np.divide(num, den, out=np.zeros_like(num), where=den > 0.0)
        return out if out.ndim else float(out)

    return integrand


def uspc_bound_integrand(
    model: NoiseSpectrumModel, profile: ProbeProfile, theta: float
) -> Callable:
    """Integrand of the photon-counting information, via mode occupancies.

    Per unit bandwidth the detected mode occupancy is
    nbar = 2 S_k S_X and the per-mode information is
    (d nbar)^2 / (nbar (1 + nbar)); the continuum density is half that.
    """
    if model.kind == MAGNITUDE_SQUARED:
        theta2 = float(theta) ** 2

        def integrand(w):
            g = np.asarray(profile.probe_psd(w) * model.shape(w), dtype=float)
            # (dnbar)^2/(2 nbar (1+nbar)) with nbar = 2 theta^2 g, theta^2 cancelled
            out = 4.0 * g / (1.0 + 2.0 * theta2 * g)
            return out if out.ndim else float(out)

        return integrand

    def integrand(w):
        sx = np.asarray(model.psd(w, theta), dtype=float)
        dsx = np.asarray(model.dpsd_dtheta(w, theta), dtype=float)
        sk = np.asarray(profile.probe_psd(w), dtype=float)
        nbar = 2.0 * sk * sx
        dnbar = 2.0 * sk * dsx
        den = 2.0 * nbar * (1.0 + nbar)
        out = np.divide(dnbar * dnbar, den, out=np.zeros_like(den), where=den > 0.0)
        return out if out.ndim else float(out)

    return integrand


def homodyne_bound_integrand(
    model: NoiseSpectrumModel, profile: ProbeProfile, theta: float
) -> Callable:
    """Whittle-likelihood information density (dS_X)^2 / (2 (S_X + S_eta)^2).

    Finite at S_X = 0 because the imprecision floor S_eta is positive.
    """

    def integrand(w):
        sx = np.asarray(model.psd(w, theta), dtype=float)
        dsx = np.asarray(model.dpsd_dtheta(w, theta), dtype=float)
        seta = np.asarray(profile.phase_psd(w), dtype=float)
        tot = sx + seta
        out = dsx * dsx / (2.0 * tot * tot)
        return out if out.ndim else float(out)

    return integrand


def quantum_fisher_bound(
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta: float,
    duration: float,
    spec: QuadratureSpec | None = None,
) -> InfoReport:
    """Best information any readout of the probe can extract."""
    duration = _check_duration(duration)
    value, err = _band_integral(
        quantum_bound_integrand(model, profile, theta), model, profile, duration, spec
    )
    return InfoReport(value, "quantum-continuum", duration, quad_error=err)


def fisher_uspc_continuum(
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta: float,
    duration: float,
    spec: QuadratureSpec | None = None,
) -> InfoReport:
    """Information of spectral photon counting after unsqueezing."""
    duration = _check_duration(duration)
    value, err = _band_integral(
        uspc_bound_integrand(model, profile, theta), model, profile, duration, spec
    )
    return InfoReport(value, "uspc-continuum", duration, quad_error=err)


def fisher_uspc_discrete(
    model: NoiseSpectrumModel, profile: ProbeProfile, theta: float, grid
) -> InfoReport:
    """Photon-counting information summed over the modes of grid."""
    w = grid.frequencies
    sk = np.asarray(profile.probe_psd(w), dtype=float)
    if model.kind == MAGNITUDE_SQUARED:
        g = sk * np.asarray(model.shape(w), dtype=float)
        per_mode = 8.0 * g / (1.0 + 2.0 * float(theta) ** 2 * g)
    else:
        sx = np.asarray(model.psd(w, theta), dtype=float)
        dsx = np.asarray(model.dpsd_dtheta(w, theta), dtype=float)
        nbar = 2.0 * sk * sx
        dnbar = 2.0 * sk * dsx
        if np.any((nbar == 0.0) & (dnbar != 0.0)):
            raise ValueError("mode with zero occupancy but nonzero derivative")
        den = nbar * (1.0 + nbar)
        per_mode = np.divide(dnbar * dnbar, den, out=np.zeros_like(den), where=den > 0.0)
    return InfoReport(
        float(np.sum(per_mode)),
        "uspc-discrete",
        grid.duration,
        mode_count=grid.mode_count,
    )


def fisher_homodyne(
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta: float,
    duration: float,
    spec: QuadratureSpec | None = None,
) -> InfoReport:
    """Information of continuous homodyne readout with imprecision S_eta."""
    duration = _check_duration(duration)
    value, err = _band_integral(
        homodyne_bound_integrand(model, profile, theta), model, profile, duration, spec
    )
    return InfoReport(value, "homodyne-continuum", duration, quad_error=err)


def fisher_homodyne_discrete(
    model: NoiseSpectrumModel, profile: ProbeProfile, theta: float, grid
) -> InfoReport:
    """Whittle information of the periodogram, summed over grid modes.

    Per exponential mode with mean mu = S_eta + S_X the information is
    (d mu / mu)^2.
    """
    w = grid.frequencies
    seta = np.asarray(profile.phase_psd(w), dtype=float)
    sx = np.asarray(model.psd(w, theta), dtype=float)
    dsx = np.asarray(model.dpsd_dtheta(w, theta), dtype=float)
    mu = seta + sx
    per_mode = (dsx / mu) ** 2
    return InfoReport(
        float(np.sum(per_mode)),
        "homodyne-discrete",
        grid.duration,
        mode_count=grid.mode_count,
    )


def fisher_low_snr(
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta: float,
    duration: float,
    spec: QuadratureSpec | None = None,
) -> tuple[InfoReport, InfoReport]:
    """Leading-order informations for S_k S_X << 1.

    Returns (photon counting, homodyne).  The homodyne value carries an
    extra factor 8 S_k S_X relative to photon counting, which is the
    origin of its quadratic (rather than linear) small-signal scaling.
    """
    duration = _check_duration(duration)

    if model.kind == MAGNITUDE_SQUARED:

        def integrand_uspc(w):
            out = 4.0 * np.asarray(profile.probe_psd(w) * model.shape(w), dtype=float)
            return out if out.ndim else float(out)

    else:

        def integrand_uspc(w):
            sx = np.asarray(model.psd(w, theta), dtype=float)
            dsx = np.asarray(model.dpsd_dtheta(w, theta), dtype=float)
            sk = np.asarray(profile.probe_psd(w), dtype=float)
            out = np.divide(
                sk * dsx * dsx, sx, out=np.zeros_like(sx), where=sx > 0.0
            )
            return out if out.ndim else float(out)

    def integrand_hom(w):
        dsx = np.asarray(model.dpsd_dtheta(w, theta), dtype=float)
        sk = np.asarray(profile.probe_psd(w), dtype=float)
        out = 8.0 * (sk * dsx) ** 2
        return out if out.ndim else float(out)

    value_u, err_u = _band_integral(integrand_uspc, model, profile, duration, spec)
    value_h, err_h = _band_integral(integrand_hom, model, profile, duration, spec)
    return (
        InfoReport(value_u, "uspc-low-snr", duration, quad_error=err_u),
        InfoReport(value_h, "homodyne-low-snr", duration, quad_error=err_h),
    )


def fisher_flat_closed_form(theta: float, band_hz: float, duration: float) -> tuple[float, float]:
    """Closed forms for the flat band: (photon counting, homodyne).

    J_uspc = 4 B T / (theta^2 + 2) and
    J_hom  = 4 B T theta^2 / (1 + theta^2)^2, the latter algebraically
    equal to 4 B T / (theta^2 + 2 + 1/theta^2) with a finite theta = 0
    limit.
    """
    theta = float(theta)
    if not (theta >= 0.0 and math.isfinite(theta)):
        raise ValueError("theta must be nonnegative and finite")
    if not (band_hz > 0.0 and duration > 0.0):
        raise ValueError("band_hz and duration must be positive")
    bt = band_hz * duration
    uspc = 4.0 * bt / (theta * theta + 2.0)
    hom = 4.0 * bt * theta * theta / (1.0 + theta * theta) ** 2
    return uspc, hom


def convexity_bound_gaussian(
    variance_fn: Callable[[float], float],
    probe_variance: float,
    theta: float,
    dvariance_fn: Callable[[float], float] | None = None,
) -> float:
    """Single-mode information bound from convexity over Gaussian inputs.

    For a zero-mean Gaussian mode of variance v_X(theta) probed with
    variance v_k the bound is (dlog v_X)^2 / (2 + 1/(v_k v_X)).  It
    depends on v_X only through its value and first derivative at
    theta.  The derivative is taken by central difference when no
    dvariance_fn is supplied.
    """
    if not (probe_variance > 0.0 and math.isfinite(probe_variance)):
        raise ValueError("probe_variance must be positive and finite")
    v = float(variance_fn(theta))
    if not (v > 0.0 and math.isfinite(v)):
        raise ValueError("variance_fn must be positive at theta")
    if dvariance_fn is not None:
        dv = float(dvariance_fn(theta))
    else:
        dv = central_difference(variance_fn, float(theta))
    return dv * dv * probe_variance / (2.0 * probe_variance * v * v + v)


def convexity_bound_object_size(
    density: Callable[[float], float],
    lo: float,
    hi: float,
    probe_variance: float,
    spec: QuadratureSpec | None = None,
    norm_tol: float = 1e-6,
) -> float:
    """Information bound 4 v_k <Z^2> for locating an object of profile density.

    density must be a probability density on [lo, hi] (infinite ends
    allowed).  lo == hi denotes a point mass at that position.  Raises
    if the density does not integrate to 1 within norm_tol.
    """
    if not (probe_variance > 0.0 and math.isfinite(probe_variance)):
        raise ValueError("probe_variance must be positive and finite")
    lo = float(lo)
    hi = float(hi)
    if lo > hi:
        raise ValueError("need lo <= hi")
    if lo == hi:
        return 4.0 * probe_variance * lo * lo
    spec = spec if spec is not None else DEFAULT_QUADRATURE
    norm = integrate(density, lo, hi, spec).value
    if abs(norm - 1.0) > norm_tol:
        raise ValueError(f"density integrates to {norm:.6g}, not 1")
    second_moment = integrate(lambda z: density(z) * z * z, lo, hi, spec).value
    return 4.0 * probe_variance * second_moment
