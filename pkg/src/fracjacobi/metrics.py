"""Error summaries of estimate series against a reference."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .differentiator import EstimateSeries
from .errors import DataError

DEFAULT_TRIM = 0.05


@dataclass(frozen=True, eq=False)
class ErrorReport:
    abscissae: np.ndarray
    abs_errors: np.ndarray
    rmse: float
    max_abs: float
    region: tuple

    def __len__(self) -> int:
        return self.abs_errors.size


def trim_slice(n: int, trim_fraction: float) -> slice:
    """Central slice left after dropping ``floor(trim_fraction * n)`` points at each end."""
    if not 0 <= trim_fraction < 0.5:
        raise ValueError(f"trim fraction must lie in [0, 0.5), got {trim_fraction}")
    k = int(math.floor(trim_fraction * n + 1e-9))
    if n - 2 * k < 1:
        raise ValueError(f"trimming {k} points at each end leaves nothing of {n}")
    return slice(k, n - k)


def _report(x: np.ndarray, err: np.ndarray, trim_fraction: float) -> ErrorReport:
    keep = trim_slice(err.size, trim_fraction)
    x, err = x[keep], np.abs(err[keep])
    return ErrorReport(
        abscissae=x,
        abs_errors=err,
        rmse=float(np.sqrt(np.mean(err**2))),
        max_abs=float(err.max()),
        region=(float(x[0]), float(x[-1])),
    )


def error_report(
    estimates: EstimateSeries, truth, trim_fraction: float = DEFAULT_TRIM
) -> ErrorReport:
    """Pointwise ``|estimate - truth|`` over the central part of the series.

    ``truth`` is either a sequence aligned with ``estimates`` or an
    :class:`EstimateSeries`, in which case only common abscissae are scored.
    """
    x = estimates.abscissae
    est = estimates.values
    if isinstance(truth, EstimateSeries):
        common, ie, it = np.intersect1d(x, truth.abscissae, return_indices=True)
        if common.size == 0:
            raise DataError("estimate and truth share no abscissae")
        x, est, ref = common, est[ie], truth.values[it]
    else:
        ref = np.asarray(truth, dtype=float)
        if ref.shape != est.shape:
            raise DataError(f"truth has {ref.size} values for {est.size} estimates")
    return _report(x, est - ref, trim_fraction)


def noise_contribution(
    noisy_estimates: EstimateSeries,
    clean_estimates: EstimateSeries,
    trim_fraction: float = 0.0,
) -> ErrorReport:
    """``|noisy - clean|``: what the estimator makes of the noise alone."""
    if noisy_estimates.abscissae.shape != clean_estimates.abscissae.shape or not np.array_equal(
        noisy_estimates.abscissae, clean_estimates.abscissae
    ):
        raise DataError("noisy and clean estimates are on different abscissae")
    return _report(
        noisy_estimates.abscissae,
        noisy_estimates.values - clean_estimates.values,
        trim_fraction,
    )


def write_report_csv(path, report: ErrorReport) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "abs_error"])
        for x, e in zip(report.abscissae, report.abs_errors):
            writer.writerow([repr(float(x)), repr(float(e))])
        lo, hi = report.region
        fh.write(f"# rmse={report.rmse!r} max={report.max_abs!r} region={lo!r},{hi!r}\n")


def read_report_csv(path) -> ErrorReport:
    xs, errs = [], []
    summary = {}
    with open(path, encoding="utf-8") as fh:
        rows = fh.read().splitlines()
    if not rows or rows[0].strip() != "x,abs_error":
        raise DataError(f"{path}: expected header 'x,abs_error'")
    for line in rows[1:]:
        if line.startswith("#"):
            for item in line[1:].split():
                key, _, val = item.partition("=")
                summary[key] = val
        elif line.strip():
            x, e = line.split(",")
            xs.append(float(x))
            errs.append(float(e))
    lo, hi = (float(v) for v in summary["region"].split(","))
    return ErrorReport(
        np.array(xs), np.array(errs), float(summary["rmse"]), float(summary["max"]), (lo, hi)
    )
