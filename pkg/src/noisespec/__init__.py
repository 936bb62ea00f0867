"""Estimation and detection limits for squeezed-light spectroscopy of
weak stationary displacement noise, with Monte Carlo verification."""

from .numerics import (
    DEFAULT_QUADRATURE,
    IntegralResult,
    MaximizeResult,
    QuadratureError,
    QuadratureSpec,
    central_difference,
    integrate,
    maximize_1d,
)
from .spectra import (
    FlatBandConfig,
    NoiseSpectrumModel,
    ProbeProfile,
    TabulatedCurve,
    make_flat_band,
)
from .fisher import (
    InfoReport,
    convexity_bound_gaussian,
    convexity_bound_object_size,
    fisher_flat_closed_form,
    fisher_homodyne,
    fisher_homodyne_discrete,
    fisher_low_snr,
    fisher_uspc_continuum,
    fisher_uspc_discrete,
    quantum_fisher_bound,
)
from .chernoff import (
    ExponentReport,
    chernoff_homodyne,
    chernoff_homodyne_discrete,
    chernoff_low_snr,
    chernoff_uspc,
    chernoff_uspc_discrete,
    error_prob_bounds,
    fidelity_uspc,
    quantum_chernoff,
)
from .simulate import (
    ModeGrid,
    SeedSpec,
    read_mode_record,
    sample_fourier_coeffs,
    sample_homodyne_periodogram,
    sample_uspc_counts,
    synthesize_process,
    write_mode_record,
)
from .inference import (
    McDetectionResult,
    McEstimationResult,
    MleResult,
    loglik_homodyne,
    loglik_uspc,
    lrt_detect_homodyne,
    lrt_detect_uspc,
    mc_detection,
    mc_estimation,
    mle_homodyne,
    mle_uspc,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_QUADRATURE",
    "ExponentReport",
    "FlatBandConfig",
    "InfoReport",
    "IntegralResult",
    "MaximizeResult",
    "McDetectionResult",
    "McEstimationResult",
    "MleResult",
    "ModeGrid",
    "NoiseSpectrumModel",
    "ProbeProfile",
    "QuadratureError",
    "QuadratureSpec",
    "SeedSpec",
    "TabulatedCurve",
    "central_difference",
    "chernoff_homodyne",
    "chernoff_homodyne_discrete",
    "chernoff_low_snr",
    "chernoff_uspc",
    "chernoff_uspc_discrete",
    "convexity_bound_gaussian",
    "convexity_bound_object_size",
    "error_prob_bounds",
    "fidelity_uspc",
    "fisher_flat_closed_form",
    "fisher_homodyne",
    "fisher_homodyne_discrete",
    "fisher_low_snr",
    "fisher_uspc_continuum",
    "fisher_uspc_discrete",
    "integrate",
    "loglik_homodyne",
    "loglik_uspc",
    "lrt_detect_homodyne",
    "lrt_detect_uspc",
    "make_flat_band",
    "maximize_1d",
    "mc_detection",
    "mc_estimation",
    "mle_homodyne",
    "mle_uspc",
    "quantum_chernoff",
    "quantum_fisher_bound",
    "read_mode_record",
    "sample_fourier_coeffs",
    "sample_homodyne_periodogram",
    "sample_uspc_counts",
    "synthesize_process",
    "write_mode_record",
]
