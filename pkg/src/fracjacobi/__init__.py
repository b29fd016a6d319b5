"""Fractional-order differentiation of noisy sampled signals with Jacobi kernels."""

from .dfosgd import DfosgdConfig, estimate_series_dfosgd
from .differentiator import (
    EstimateSeries,
    WindowConfig,
    estimate_at,
    estimate_series,
    smooth_at,
)
from .kernel import DiffOrder, KernelTable, build_fractional_kernel, build_integer_kernel
from .metrics import ErrorReport, error_report, noise_contribution
from .signals import SampledSignal, add_noise, calibrate_c, sample, snr_db
from .specfun import JacobiParams

__version__ = "0.1.0"

__all__ = [
    "DfosgdConfig",
    "DiffOrder",
    "ErrorReport",
    "EstimateSeries",
    "JacobiParams",
    "KernelTable",
    "SampledSignal",
    "WindowConfig",
    "add_noise",
    "build_fractional_kernel",
    "build_integer_kernel",
    "calibrate_c",
    "error_report",
    "estimate_at",
    "estimate_series",
    "estimate_series_dfosgd",
    "noise_contribution",
    "sample",
    "smooth_at",
    "snr_db",
]
