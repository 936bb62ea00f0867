"""Shared helpers: randomized model/probe configurations for equality tests."""

from __future__ import annotations

import numpy as np

from noisespec import (
    FlatBandConfig,
    NoiseSpectrumModel,
    ProbeProfile,
    TabulatedCurve,
    make_flat_band,
)


def random_flat_config(rng: np.random.Generator):
    """Random flat band: (model, profile, theta, duration)."""
    band = float(rng.uniform(0.3, 3.0))
    level = float(rng.uniform(0.2, 5.0))
    theta = float(np.exp(rng.uniform(np.log(0.05), np.log(3.0))))
    duration = float(rng.uniform(0.5, 4.0))
    model, profile = make_flat_band(FlatBandConfig(band_hz=band, probe_level=level))
    return model, profile, theta, duration


def random_tabulated_config(rng: np.random.Generator):
    """Random piecewise-linear shape and gain tables: (model, profile, theta, duration)."""
    n_half = int(rng.integers(3, 8))
    w_half = np.sort(rng.uniform(0.3, 8.0, size=n_half))
    omega = np.concatenate([-w_half[::-1], [0.0], w_half])

    v_half = rng.uniform(0.1, 2.0, size=n_half)
    values = np.concatenate([v_half[::-1], [float(rng.uniform(0.1, 2.0))], v_half])
    shape = TabulatedCurve(omega, values, outside="zero")
    model = NoiseSpectrumModel.magnitude_squared(shape)

    g_half = rng.uniform(0.5, 1.5, size=n_half)
    gains = np.concatenate([g_half[::-1], [float(rng.uniform(0.5, 1.5))], g_half])
    gain = TabulatedCurve(omega, gains, outside="clamp")
    profile = ProbeProfile.from_table(float(rng.uniform(0.3, 2.0)), gain)

    theta = float(np.exp(rng.uniform(np.log(0.05), np.log(3.0))))
    duration = float(rng.uniform(0.5, 4.0))
    return model, profile, theta, duration


def random_configs(count: int, seed: int = 20260819):
    """Half flat, half tabulated, deterministically seeded."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        if i % 2 == 0:
            out.append(random_flat_config(rng))
        else:
            out.append(random_tabulated_config(rng))
    return out
