"""Jacobi differentiators applied to sampled signals.

The estimate of the order-``alpha`` derivative at the physical point
``a + h t`` is the quadrature of ``Q(tau, t) y(a + h tau)`` over [0, 1],
divided by ``h**alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DataError
from .kernel import DiffOrder, as_order, build_fractional_kernel, build_integer_kernel
from .signals import SampledSignal
from .specfun import JacobiParams

MODES = ("global", "causal")


@dataclass(frozen=True)
class WindowConfig:
    """Estimation window ``[a, a + h]``, normalized abscissa ``t`` and filter settings."""

    a: float
    h: float
    t: float
    N: int
    order: DiffOrder
    params: JacobiParams = field(default_factory=JacobiParams)
    rule: str = "gregory"

    def __post_init__(self):
        object.__setattr__(self, "order", as_order(self.order))
        if not self.h > 0:
            raise ValueError(f"window length h must be positive, got {self.h}")
        if not 0 < self.t <= 1:
            raise ValueError(f"normalized abscissa t must lie in (0, 1], got {self.t}")
        if self.N < 0:
            raise ValueError(f"truncation order N must be >= 0, got {self.N}")

    @property
    def b(self) -> float:
        return self.a + self.h

    @property
    def point(self) -> float:
        return self.a + self.h * self.t


@dataclass(frozen=True, eq=False)
class EstimateSeries:
    abscissae: np.ndarray
    values: np.ndarray
    mode: str
    config: object = None

    def __post_init__(self):
        x = np.array(self.abscissae, dtype=float)
        v = np.array(self.values, dtype=float)
        if x.shape != v.shape or x.ndim != 1:
            raise ValueError("abscissae and values must be 1-D arrays of equal length")
        if x.size > 1 and not np.all(np.diff(x) > 0):
            raise ValueError("abscissae must be strictly increasing")
        x.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "abscissae", x)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size


def _window_slice(signal: SampledSignal, a: float, h: float) -> slice:
    start = (a - signal.a) / signal.T_s
    M = h / signal.T_s
    k0, m = int(round(start)), int(round(M))
    if abs(start - k0) > 1e-6 or abs(M - m) > 1e-6 * max(1.0, M):
        raise DataError(f"window [{a}, {a + h}] is not aligned with the sampling grid")
    if m < 1:
        raise DataError("window must span at least one sample interval")
    if k0 < 0 or k0 + m > signal.M:
        raise DataError(
            f"window [{a}, {a + h}] leaves the signal range "
            f"[{signal.a}, {signal.a + signal.h}]"
        )
    return slice(k0, k0 + m + 1)


def estimate_at(signal: SampledSignal, config: WindowConfig) -> float:
    """Fractional Jacobi estimate of ``y^(alpha)(a + h t)`` from the samples in the window."""
    window = _window_slice(signal, config.a, config.h)
    samples = signal.values[window]
    kern = build_fractional_kernel(
        config.params, config.order, config.N, config.t, samples.size - 1, config.rule
    )
    return kern.integrate(samples) / config.h**config.order.alpha


def estimate_integer_at(signal: SampledSignal, config: WindowConfig) -> float:
    """Same estimate through the integer-order kernel; ``alpha`` must be an integer."""
    if not config.order.is_integer:
        raise ValueError(f"integer-order kernel needs an integer order, got {config.order.alpha}")
    n = int(config.order.alpha)
    window = _window_slice(signal, config.a, config.h)
    samples = signal.values[window]
    kern = build_integer_kernel(config.params, n, config.N, config.t, samples.size - 1, config.rule)
    return kern.integrate(samples) / config.h**n


def smooth_at(
    signal: SampledSignal,
    params: JacobiParams,
    N: int,
    a: float,
    h: float,
    t: float,
    rule: str = "gregory",
) -> float:
    """Value at ``a + h t`` of the degree-``N`` Jacobi series fitted on ``[a, a + h]``.

    Accepts ``t = 0``, unlike the fractional path.
    """
    window = _window_slice(signal, a, h)
    samples = signal.values[window]
    kern = build_integer_kernel(params, 0, N, t, samples.size - 1, rule)
    return kern.integrate(samples)


def estimate_series(
    signal: SampledSignal,
    config: WindowConfig,
    mode: str = "global",
    window_samples: int | None = None,
) -> EstimateSeries:
    """Estimates along the whole signal.

    ``global``: one window spanning the record; ``t`` runs over ``j / M`` for
    ``j = 1..M`` (the window start is skipped, the fractional kernel being
    singular at ``t = 0``). ``config.a``, ``config.h`` and ``config.t`` are
    ignored.

    ``causal``: a window of ``window_samples`` samples slides along the
    record and each estimate is taken at its right end (``t = 1``), so it
    uses past samples only. The first ``window_samples - 1`` points get no
    estimate.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    alpha = config.order.alpha
    y = signal.values
    x = signal.x

    if mode == "global":
        M = signal.M
        h = signal.h
        out = np.empty(M)
        for j in range(1, M + 1):
            kern = build_fractional_kernel(config.params, config.order, config.N, j / M, M, config.rule)
            out[j - 1] = kern.integrate(y)
        cfg = replace(config, a=signal.a, h=h, t=1.0)
        return EstimateSeries(x[1:], out / h**alpha, mode, cfg)

    if window_samples is None:
        raise ValueError("causal mode needs window_samples")
    if window_samples < 2:
        raise ValueError(f"a causal window needs at least 2 samples, got {window_samples}")
    if window_samples > len(signal):
        raise DataError(
            f"window of {window_samples} samples exceeds the signal length {len(signal)}"
        )
    M = window_samples - 1
    h = M * signal.T_s
    kern = build_fractional_kernel(config.params, config.order, config.N, 1.0, M, config.rule)
    out = np.correlate(y, kern.taps, mode="valid") / h**alpha
    cfg = replace(config, a=signal.a, h=h, t=1.0)
    return EstimateSeries(x[M:], out, mode, cfg)


def write_estimates_csv(path, series: EstimateSeries) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("x,estimate\n")
        for x, v in zip(series.abscissae, series.values):
            fh.write(f"{float(x)!r},{float(v)!r}\n")


def read_estimates_csv(path, mode: str = "global") -> EstimateSeries:
    xs, vs = [], []
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    body = [(n, ln) for n, ln in enumerate(lines, start=1) if ln and not ln.startswith("#")]
    if not body or body[0][1] != "x,estimate":
        raise DataError(f"{path}: expected header 'x,estimate'")
    for lineno, line in body[1:]:
        try:
            x, v = (float(c) for c in line.split(","))
        except ValueError:
            raise DataError(f"{path}:{lineno}: malformed row {line!r}") from None
        xs.append(x)
        vs.append(v)
    return EstimateSeries(np.array(xs), np.array(vs), mode)
