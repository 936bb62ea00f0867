import math

import numpy as np
import pytest

from noisespec import (
    FlatBandConfig,
    NoiseSpectrumModel,
    ProbeProfile,
    TabulatedCurve,
    make_flat_band,
)
from noisespec.numerics import central_difference

TWO_PI = 2.0 * math.pi


@pytest.fixture
def flat():
    return make_flat_band(FlatBandConfig(band_hz=1.0, probe_level=1.0))


def test_flat_shape_level(flat):
    model, _ = flat
    # probe level 1 puts the shape at 1/4 inside |omega| <= 2 pi
    assert model.psd(0.0, 1.0) == 0.25
    assert model.psd(TWO_PI, 1.0) == 0.25  # band edge included
    assert model.psd(TWO_PI + 1e-9, 1.0) == 0.0


def test_flat_psd_scales_with_theta_squared(flat):
    model, _ = flat
    assert model.psd(1.0, 2.0) == pytest.approx(1.0, rel=1e-15)
    assert model.dpsd_dtheta(1.0, 2.0) == pytest.approx(1.0, rel=1e-15)  # 2*theta*R


def test_phase_psd_level(flat):
    _, profile = flat
    assert profile.probe_psd(0.3) == 1.0
    assert profile.phase_psd(0.3) == 0.25


def test_spectral_snr_is_theta_squared(flat):
    # noise_psd / phase_psd = 4 S_k S_X = theta^2 in-band, by construction
    model, profile = flat
    w = np.linspace(-TWO_PI, TWO_PI, 101)
    for theta in (0.3, 1.0, 2.5):
        snr = model.psd(w, theta) / profile.phase_psd(w)
        assert np.allclose(snr, theta * theta, rtol=1e-12)


def test_psd_even_and_nonnegative(flat):
    model, profile = flat
    rng = np.random.default_rng(7)
    w = rng.uniform(-30.0, 30.0, size=1_000_000)
    theta = rng.uniform(0.0, 5.0)
    sx = model.psd(w, theta)
    assert np.all(sx >= 0.0)
    assert np.array_equal(sx, model.psd(-w, theta))
    sk = profile.probe_psd(w)
    assert np.all(sk > 0.0)
    assert np.array_equal(sk, profile.probe_psd(-w))


def test_derivative_matches_finite_difference(flat):
    model, _ = flat
    rng = np.random.default_rng(11)
    for _ in range(20):
        w = float(rng.uniform(-TWO_PI, TWO_PI))
        theta = float(rng.uniform(0.1, 4.0))
        fd = central_difference(lambda t: model.psd(w, t), theta)
        assert model.dpsd_dtheta(w, theta) == pytest.approx(fd, rel=1e-6)


def test_general_kind_derivative():
    psd = lambda w, t: (t + t**3) * np.exp(-np.asarray(w) ** 2)
    dpsd = lambda w, t: (1.0 + 3.0 * t**2) * np.exp(-np.asarray(w) ** 2)
    model = NoiseSpectrumModel.general(psd, dpsd, support=(-5.0, 5.0))
    rng = np.random.default_rng(3)
    for _ in range(10):
        w = float(rng.uniform(-5.0, 5.0))
        theta = float(rng.uniform(0.1, 2.0))
        fd = central_difference(lambda t: model.psd(w, t), theta)
        assert model.dpsd_dtheta(w, theta) == pytest.approx(fd, rel=1e-5)


def test_general_kind_without_derivative_rejects():
    model = NoiseSpectrumModel.general(lambda w, t: t * np.ones_like(w), None, (-1.0, 1.0))
    with pytest.raises(ValueError):
        model.dpsd_dtheta(0.0, 1.0)


def test_theta_range_enforced(flat):
    model, _ = flat
    with pytest.raises(ValueError):
        model.psd(0.0, -1.0)
    with pytest.raises(ValueError):
        model.psd(0.0, math.inf)


def test_support_must_be_symmetric():
    with pytest.raises(ValueError):
        NoiseSpectrumModel.magnitude_squared(lambda w: 1.0, support=(-1.0, 2.0))


def test_tabulated_linear_interpolation():
    # triangle: node queries hit the table, midpoints sit on the chords
    curve = TabulatedCurve([-2.0, 0.0, 2.0], [0.0, 1.0, 0.0])
    assert curve(0.0) == 1.0
    assert curve(1.0) == 0.5
    assert curve(-0.5) == 0.75
    assert curve(3.0) == 0.0  # outside='zero'


def test_tabulated_clamp_extension():
    curve = TabulatedCurve([-1.0, 0.0, 1.0], [2.0, 3.0, 2.0], outside="clamp")
    assert curve(10.0) == 2.0
    assert curve(-10.0) == 2.0


def test_tabulated_file_roundtrip(tmp_path):
    path = tmp_path / "shape.txt"
    path.write_text(
        "# toy triangle shape\n-2.0 0.0\n-1.0 1.0\n0.0 0.5\n1.0 1.0\n2.0 0.0\n"
    )
    curve = TabulatedCurve.from_file(path)
    assert curve.support == (-2.0, 2.0)
    assert curve(0.5) == pytest.approx(0.75)
    assert curve.breakpoints == (-2.0, -1.0, 0.0, 1.0, 2.0)


def test_tabulated_validation():
    with pytest.raises(ValueError):
        TabulatedCurve([0.0, 1.0], [1.0, 1.0])  # asymmetric grid
    with pytest.raises(ValueError):
        TabulatedCurve([-1.0, 0.0, 1.0], [0.2, 0.5, 0.4])  # odd values
    with pytest.raises(ValueError):
        TabulatedCurve([-1.0, 1.0, 0.5], [1.0, 1.0, 1.0])  # not increasing
    with pytest.raises(ValueError):
        TabulatedCurve([-1.0, 0.0, 1.0], [1.0, -0.5, 1.0])  # negative value
    with pytest.raises(ValueError):
        TabulatedCurve([-1.0, 1.0], [1.0, 1.0], outside="wrap")


def test_probe_profile_validation():
    with pytest.raises(ValueError):
        ProbeProfile.flat(0.0)
    with pytest.raises(ValueError):
        ProbeProfile.from_table(1.0, TabulatedCurve([-1.0, 0.0, 1.0], [1.0, 0.0, 1.0]))


def test_probe_gain_profile():
    gain = TabulatedCurve([-1.0, 0.0, 1.0], [1.0, 2.0, 1.0], outside="clamp")
    profile = ProbeProfile.from_table(3.0, gain)
    assert profile.probe_psd(0.0) == 6.0
    assert profile.phase_psd(0.0) == pytest.approx(1.0 / 24.0)
    assert profile.probe_psd(5.0) == 3.0  # clamped gain edge


def test_flat_band_config_validation():
    with pytest.raises(ValueError):
        FlatBandConfig(band_hz=0.0)
    with pytest.raises(ValueError):
        FlatBandConfig(band_hz=1.0, probe_level=-1.0)
    with pytest.raises(ValueError):
        FlatBandConfig(band_hz=1.0, theta=-0.1)
