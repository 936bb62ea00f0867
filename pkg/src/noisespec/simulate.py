"""Mode-resolved sampling of the displacement process and its readouts.

A record of duration T is expanded in Fourier modes omega_m = 2 pi m / T,
m = 1..M; the zero-frequency mode carries no displacement signal and is
excluded throughout.  All samplers take a numpy Generator; SeedSpec
derives independent, reproducible generators per (purpose, trial).
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .spectra import TWO_PI, NoiseSpectrumModel, ProbeProfile

_MAX_COUNT = 2.0**62  # far beyond any physical occupancy; overflow guard


@dataclass(frozen=True)
class ModeGrid:
    """Positive-frequency Fourier modes of a record of length duration."""

    duration: float
    mode_count: int

    def __post_init__(self):
        if not (self.duration > 0.0 and math.isfinite(self.duration)):
            raise ValueError("duration must be positive and finite")
        if self.mode_count < 1:
            raise ValueError("mode_count must be at least 1")

    @classmethod
    def for_band(cls, duration: float, band_hz: float) -> "ModeGrid":
        """All modes inside |omega| <= 2 pi band_hz: M = floor(band_hz * duration)."""
        m = int(math.floor(band_hz * duration))
        if m < 1:
            raise ValueError(
                f"band_hz * duration = {band_hz * duration:.3g} puts no mode in the band"
            )
        return cls(duration, m)

    @property
    def frequencies(self) -> np.ndarray:
        """omega_m = 2 pi m / duration for m = 1..mode_count."""
        return TWO_PI * np.arange(1, self.mode_count + 1, dtype=float) / self.duration


@dataclass(frozen=True)
class SeedSpec:
    """Master seed plus the rule deriving independent streams from it.

    Streams are keyed on (crc32(purpose), trial), so trials can run in
    any order or concurrently and still reproduce bit-identical draws.
    Within a stream, mode m consumes the m-th slot of each vectorized
    draw.
    """

    master_seed: int

    def __post_init__(self):
        if self.master_seed < 0:
            raise ValueError("master_seed must be nonnegative")

    def rng(self, purpose: str, trial: int = 0) -> np.random.Generator:
        key = (zlib.crc32(purpose.encode("utf-8")), int(trial))
        return np.random.default_rng(np.random.SeedSequence(self.master_seed, spawn_key=key))


def sample_fourier_coeffs(
    model: NoiseSpectrumModel, theta: float, grid: ModeGrid, rng: np.random.Generator
) -> np.ndarray:
    """Draw the complex mode amplitudes of one record.

    Each coefficient is (u + iv)/sqrt(2) * sqrt(S_X(omega_m)) with
    independent standard normal u, v, so E|coeff|^2 = S_X(omega_m).
    """
    sx = np.asarray(model.psd(grid.frequencies, theta), dtype=float)
    if np.any(sx < 0.0) or not np.all(np.isfinite(sx)):
        raise ValueError("noise PSD must be finite and nonnegative on the grid")
    u = rng.standard_normal(grid.mode_count)
    v = rng.standard_normal(grid.mode_count)
    return (u + 1j * v) * np.sqrt(sx / 2.0)


def synthesize_process(coeffs: np.ndarray, grid: ModeGrid, times: np.ndarray) -> np.ndarray:
    """Real displacement record X(t) from its positive-frequency coefficients.

    X(t) = (2/sqrt(T)) sum_m Re[ coeff_m exp(-i omega_m t) ]; the DC
    term is zero by convention.  times must lie in [0, duration].
    """
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (grid.mode_count,):
        raise ValueError("coefficient array does not match the grid")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0.0) or np.any(times > grid.duration):
        raise ValueError("times must lie within [0, duration]")
    phase = np.outer(times, grid.frequencies)
    x = np.cos(phase) @ coeffs.real + np.sin(phase) @ coeffs.imag
    return (2.0 / math.sqrt(grid.duration)) * x


def _mode_occupancy(model, profile, theta, grid) -> np.ndarray:
    nbar = 2.0 * np.asarray(profile.probe_psd(grid.frequencies), dtype=float) * np.asarray(
        model.psd(grid.frequencies, theta), dtype=float
    )
    if np.any(nbar < 0.0) or not np.all(np.isfinite(nbar)):
        raise ValueError("mode occupancy must be finite and nonnegative")
    return nbar


def sample_uspc_counts(
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta: float,
    grid: ModeGrid,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw per-mode photon counts with the thermal law mean nbar = 2 S_k S_X.

    Inverse-CDF form: n = floor( ln(1-u) / ln(nbar/(1+nbar)) ) with
    u uniform on [0, 1), which is exact for the geometric-tail
    distribution P(n) = nbar^n / (1+nbar)^(n+1).
    """
    nbar = _mode_occupancy(model, profile, theta, grid)
    u = rng.random(grid.mode_count)
    counts = np.zeros(grid.mode_count, dtype=np.int64)
    pos = nbar > 0.0
    if np.any(pos):
        log_ratio = np.log(nbar[pos]) - np.log1p(nbar[pos])  # < 0
        raw = np.floor(np.log1p(-u[pos]) / log_ratio)
        if np.any(raw > _MAX_COUNT):
            raise OverflowError("photon count exceeds the integer range")
        counts[pos] = raw.astype(np.int64)
    return counts


def sample_homodyne_periodogram(
    model: NoiseSpectrumModel,
    profile: ProbeProfile,
    theta: float,
    grid: ModeGrid,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw per-mode periodogram values, exponential with mean S_eta + S_X."""
    mean = np.asarray(profile.phase_psd(grid.frequencies), dtype=float) + np.asarray(
        model.psd(grid.frequencies, theta), dtype=float
    )
    u = rng.random(grid.mode_count)
    return -mean * np.log1p(-u)


def write_mode_record(path: str | Path, grid: ModeGrid, values: np.ndarray) -> None:
    """Write one record as text rows: mode index, omega_m, value."""
    values = np.asarray(values)
    if values.shape != (grid.mode_count,):
        raise ValueError("value array does not match the grid")
    w = grid.frequencies
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# mode omega value\n")
        for m in range(grid.mode_count):
            v = values[m]
            if np.issubdtype(values.dtype, np.integer):
                sval = f"{int(v):d}"
            elif np.issubdtype(values.dtype, np.complexfloating):
                sval = f"{v.real:.17g}{v.imag:+.17g}j"
            else:
                sval = f"{float(v):.17g}"
            fh.write(f"{m + 1:d} {w[m]:.17g} {sval}\n")


def read_mode_record(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Read a record written by write_mode_record: (omega, values)."""
    omegas: list[float] = []
    values: list[complex] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            _, w, v = line.split()
            omegas.append(float(w))
            values.append(complex(v))
    vals = np.array(values)
    if np.all(vals.imag == 0.0):
        real = vals.real
        if np.all(real == np.floor(real)) and np.all(np.abs(real) < _MAX_COUNT):
            return np.array(omegas), real.astype(np.int64)
        return np.array(omegas), real
    return np.array(omegas), vals
