"""Noise and probe spectral densities.

Conventions: all spectra are two-sided functions of angular frequency
omega and are even in omega.  Shape and gain callables must accept
numpy arrays.  Dimensionless products (probe_psd * noise_psd,
noise_psd / phase_psd) are what the bound calculators consume, so no
absolute physical scale is imposed anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

TWO_PI = 2.0 * math.pi

MAGNITUDE_SQUARED = "magnitude-squared"
GENERAL = "general"


def _check_symmetric_grid(omega: np.ndarray, values: np.ndarray) -> None:
    scale = float(np.max(np.abs(omega))) or 1.0
    if not np.allclose(omega, -omega[::-1], atol=1e-12 * scale, rtol=0.0):
        raise ValueError("sample grid must be symmetric in omega")
    vscale = float(np.max(np.abs(values))) or 1.0
    if not np.allclose(values, values[::-1], atol=1e-9 * vscale, rtol=1e-9):
        raise ValueError("sampled values must be even in omega")


@dataclass(frozen=True)
class TabulatedCurve:
    """Piecewise-linear curve on a symmetric omega grid.

    outside='zero' treats the curve as zero beyond the grid (noise
    shapes, bounded support); outside='clamp' extends the edge values
    (probe gain profiles).
    """

    omega: np.ndarray
    values: np.ndarray
    outside: str = "zero"

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if omega.ndim != 1 or omega.shape != values.shape or omega.size < 2:
            raise ValueError("need matching 1-d arrays with at least two samples")
        if not (np.all(np.isfinite(omega)) and np.all(np.isfinite(values))):
            raise ValueError("samples must be finite")
        if np.any(np.diff(omega) <= 0.0):
            raise ValueError("omega samples must be strictly increasing")
        if np.any(values < 0.0):
            raise ValueError("sampled values must be nonnegative")
        if self.outside not in ("zero", "clamp"):
            raise ValueError("outside must be 'zero' or 'clamp'")
        _check_symmetric_grid(omega, values)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_file(cls, path: str | Path, outside: str = "zero") -> "TabulatedCurve":
        """Load a two-column text file (omega, value); '#' starts a comment."""
        data = np.loadtxt(path, comments="#", ndmin=2)
        if data.ndim != 2 or data.shape[1] != 2:
            raise ValueError(f"{path}: expected two columns (omega, value)")
        return cls(data[:, 0], data[:, 1], outside=outside)

    @property
    def support(self) -> tuple[float, float]:
        return (float(self.omega[0]), float(self.omega[-1]))

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(float(w) for w in self.omega)

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        out = np.interp(w, self.omega, self.values)
        if self.outside == "zero":
            inside = (w >= self.omega[0]) & (w <= self.omega[-1])
            out = np.where(inside, out, 0.0)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class NoiseSpectrumModel:
    """Parametric family of displacement-noise spectra S_X(omega | theta).

    Two kinds: 'magnitude-squared' scales a fixed nonnegative shape by
    theta**2; 'general' wraps arbitrary callables S_X(omega, theta) and
    dS_X/dtheta(omega, theta) supplied by the caller.  support is the
    closed symmetric interval outside which the spectrum vanishes; the
    bound integrals run over it.
    """

    kind: str
    support: tuple[float, float]
    shape: Callable | None = None
    psd_fn: Callable | None = None
    dpsd_fn: Callable | None = None
    breakpoints: tuple[float, ...] | None = None
    theta_range: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind not in (MAGNITUDE_SQUARED, GENERAL):
            raise ValueError(f"unknown model kind {self.kind!r}")
        lo, hi = self.support
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError("support must be a finite interval")
        scale = max(abs(lo), abs(hi))
        if abs(lo + hi) > 1e-12 * scale:
            raise ValueError("support must be symmetric about omega = 0")

    @classmethod
    def magnitude_squared(
        cls,
        shape: Callable,
        support: tuple[float, float] | None = None,
        breakpoints: tuple[float, ...] | None = None,
        theta_range: tuple[float, float] | None = None,
    ) -> "NoiseSpectrumModel":
        """Family S_X = theta**2 * shape(omega)."""
        if support is None:
            support = getattr(shape, "support", None)
        if breakpoints is None:
            breakpoints = getattr(shape, "breakpoints", None)
        if support is None:
            raise ValueError("support is required unless the shape carries one")
        return cls(
            kind=MAGNITUDE_SQUARED,
            support=(float(support[0]), float(support[1])),
            shape=shape,
            breakpoints=tuple(breakpoints) if breakpoints is not None else None,
            theta_range=theta_range,
        )

    @classmethod
    def general(
        cls,
        psd_fn: Callable,
        dpsd_fn: Callable | None,
        support: tuple[float, float],
        breakpoints: tuple[float, ...] | None = None,
        theta_range: tuple[float, float] | None = None,
    ) -> "NoiseSpectrumModel":
        """Family with caller-supplied S_X(omega, theta) and its theta derivative."""
        return cls(
            kind=GENERAL,
            support=(float(support[0]), float(support[1])),
            psd_fn=psd_fn,
            dpsd_fn=dpsd_fn,
            breakpoints=tuple(breakpoints) if breakpoints is not None else None,
            theta_range=theta_range,
        )

    def _check_theta(self, theta: float) -> float:
        theta = float(theta)
        if not math.isfinite(theta):
            raise ValueError("theta must be finite")
        if self.theta_range is not None:
            lo, hi = self.theta_range
            if not (lo <= theta <= hi):
                raise ValueError(f"theta={theta} outside admissible range [{lo}, {hi}]")
        return theta

    def psd(self, omega, theta: float):
        """S_X(omega | theta); nonnegative and even in omega."""
        theta = self._check_theta(theta)
        if self.kind == MAGNITUDE_SQUARED:
            return theta * theta * self.shape(omega)
        return self.psd_fn(omega, theta)

    def dpsd_dtheta(self, omega, theta: float):
        """dS_X/dtheta; zero wherever the spectrum itself vanishes."""
        theta = self._check_theta(theta)
        if self.kind == MAGNITUDE_SQUARED:
            return 2.0 * theta * self.shape(omega)
        if self.dpsd_fn is None:
            raise ValueError("model carries no theta derivative")
        return self.dpsd_fn(omega, theta)


@dataclass(frozen=True)
class ProbeProfile:
    """Squeezed-probe description: mean photon flux and antisqueezing gain.

    probe_psd is the effective phase-quadrature readout spectrum
    mean_flux * gain(omega); phase_psd is the imprecision spectrum
    1 / (4 * probe_psd) of an ideal homodyne readout of the same probe.
    """

    mean_flux: float
    gain: Callable | None = None  # |gain|^2 profile, even and positive; None = flat 1
    breakpoints: tuple[float, ...] | None = None

    def __post_init__(self):
        if not (self.mean_flux > 0.0 and math.isfinite(self.mean_flux)):
            raise ValueError("mean_flux must be positive and finite")

    @classmethod
    def flat(cls, level: float) -> "ProbeProfile":
        """Frequency-independent probe PSD equal to level."""
        return cls(mean_flux=float(level))

    @classmethod
    def from_table(cls, mean_flux: float, curve: TabulatedCurve) -> "ProbeProfile":
        if np.any(curve.values <= 0.0):
            raise ValueError("gain profile must be strictly positive")
        if curve.outside != "clamp":
            curve = TabulatedCurve(curve.omega, curve.values, outside="clamp")
        return cls(mean_flux=float(mean_flux), gain=curve, breakpoints=curve.breakpoints)

    def probe_psd(self, omega):
        """S_k(omega) = mean_flux * gain(omega)."""
        if self.gain is None:
            w = np.asarray(omega, dtype=float)
            out = np.full(w.shape, self.mean_flux)
            return out if out.ndim else float(self.mean_flux)
        return self.mean_flux * self.gain(omega)

    def phase_psd(self, omega):
        """Homodyne imprecision spectrum 1 / (4 S_k); singular where S_k = 0."""
        sk = np.asarray(self.probe_psd(omega), dtype=float)
        if np.any(sk <= 0.0):
            raise ValueError("phase_psd is singular where the probe PSD vanishes")
        out = 1.0 / (4.0 * sk)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class FlatBandConfig:
    """Flat noise band |omega| <= 2*pi*band_hz probed at constant PSD level.

    theta is the dimensionless signal amplitude; theta**2 equals the
    in-band spectral signal-to-noise ratio noise_psd / phase_psd.
    """

    band_hz: float
    probe_level: float = 1.0
    theta: float = 1.0

    def __post_init__(self):
        if not (self.band_hz > 0.0 and math.isfinite(self.band_hz)):
            raise ValueError("band_hz must be positive and finite")
        if not (self.probe_level > 0.0 and math.isfinite(self.probe_level)):
            raise ValueError("probe_level must be positive and finite")
        if not (self.theta >= 0.0 and math.isfinite(self.theta)):
            raise ValueError("theta must be nonnegative and finite")


def make_flat_band(config: FlatBandConfig) -> tuple[NoiseSpectrumModel, ProbeProfile]:
    """Build the matched flat-band model and probe.

    The shape level 1/(4*probe_level) makes noise_psd/phase_psd equal
    theta**2 everywhere in the band, so theta**2 is the spectral SNR.
    """
    edge = TWO_PI * config.band_hz
    level = 1.0 / (4.0 * config.probe_level)

    def shape(w, _edge=edge, _level=level):
        w = np.asarray(w, dtype=float)
        out = np.where(np.abs(w) <= _edge, _level, 0.0)
        return out if out.ndim else float(out)

    model = NoiseSpectrumModel.magnitude_squared(
        shape, support=(-edge, edge), theta_range=(0.0, math.inf)
    )
    profile = ProbeProfile.flat(config.probe_level)
    return model, profile
