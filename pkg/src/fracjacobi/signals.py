"""Uniformly sampled test signals, seeded Gaussian noise and SNR bookkeeping."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .errors import DataError

#: Identifies the noise stream. Bump the suffix if the generator ever changes.
NOISE_GENERATOR = "numpy.PCG64/standard_normal/v1"


class SignalFormatError(DataError):
    """A signal file could not be parsed."""


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Samples ``values[i]`` taken at ``x_i = a + T_s * i``.

    ``noise`` holds the injected noise ``c * w_i`` when the signal was
    corrupted synthetically, so that clean and noisy parts stay separable.
    """

    a: float
    T_s: float
    values: np.ndarray
    noise: Optional[np.ndarray] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("a signal needs a non-empty 1-D array of values")
        if not (self.T_s > 0 and math.isfinite(self.T_s)):
            raise ValueError(f"sample period must be positive, got {self.T_s!r}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "T_s", float(self.T_s))
        if self.noise is not None:
            noise = np.array(self.noise, dtype=float)
            if noise.shape != values.shape:
                raise ValueError("noise must have the same length as values")
            noise.setflags(write=False)
            object.__setattr__(self, "noise", noise)

    def __len__(self) -> int:
        return self.values.size

    @property
    def M(self) -> int:
        return self.values.size - 1

    @property
    def x(self) -> np.ndarray:
        return self.a + self.T_s * np.arange(self.values.size)

    @property
    def h(self) -> float:
        return self.T_s * self.M

    @property
    def clean(self) -> "SampledSignal":
        """The signal with any recorded noise subtracted."""
        if self.noise is None:
            return self
        return SampledSignal(self.a, self.T_s, self.values - self.noise)

    def with_values(self, values) -> "SampledSignal":
        return SampledSignal(self.a, self.T_s, values)


def sample(f: Callable, a: float, b: float, M: int) -> SampledSignal:
    """Sample ``f`` at ``M + 1`` equispaced points covering [a, b]."""
    if not b > a:
        raise ValueError(f"need b > a, got a={a}, b={b}")
    if M < 1:
        raise ValueError(f"need M >= 1, got {M}")
    T_s = (b - a) / M
    x = a + T_s * np.arange(M + 1)
    values = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    return SampledSignal(a, T_s, values)


def standard_noise(n: int, seed: int) -> np.ndarray:
    """``n`` iid standard normal draws from the :data:`NOISE_GENERATOR` stream."""
    return np.random.Generator(np.random.PCG64(seed)).standard_normal(n)


def add_noise(signal: SampledSignal, c: float, seed: int) -> SampledSignal:
    """Add ``c`` times white standard Gaussian noise drawn with ``seed``."""
    if c < 0:
        raise ValueError(f"noise level must be >= 0, got {c}")
    noise = c * standard_noise(len(signal), seed)
    base = signal.clean
    return SampledSignal(base.a, base.T_s, base.values + noise, noise)


def snr_db(signal: SampledSignal) -> float:
    """``10 log10(sum |y_noisy|^2 / sum |noise|^2)``.

    The numerator is the energy of the noisy samples, not of the clean ones.
    """
    if signal.noise is None:
        raise ValueError("signal carries no noise record")
    noise_energy = float(np.dot(signal.noise, signal.noise))
    if noise_energy == 0:
        raise ValueError("noise is identically zero; SNR is infinite")
    return 10.0 * math.log10(float(np.dot(signal.values, signal.values)) / noise_energy)


def calibrate_c(clean: SampledSignal, target_snr_db: float, seed: int) -> float:
    """Noise level ``c`` whose seeded noise gives ``snr_db == target_snr_db``.

    With ``u = 1/c`` the SNR ratio is the quadratic
    ``(A u^2 + 2 B u + C) / C`` in ``u`` (``A = |y|^2``, ``B = <y, w>``,
    ``C = |w|^2``), so the solve is closed form.
    """
    y = clean.clean.values
    w = standard_noise(len(y), seed)
    A = float(np.dot(y, y))
    B = float(np.dot(y, w))
    C = float(np.dot(w, w))
    if A == 0:
        raise ValueError("cannot calibrate noise against an identically zero signal")
    ratio = 10.0 ** (target_snr_db / 10.0)
    # A u^2 + 2 B u + C (1 - ratio) = 0, take the positive root
    disc = B * B - A * C * (1.0 - ratio)
    if disc < 0:
        raise ValueError(f"target SNR {target_snr_db} dB is not attainable for this signal")
    u = (-B + math.sqrt(disc)) / A
    if not u > 0:
        raise ValueError(f"target SNR {target_snr_db} dB is not attainable for this signal")
    return 1.0 / u


def write_signal_csv(path, signal: SampledSignal) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        has_noise = signal.noise is not None
        writer.writerow(["x", "value", "noise"] if has_noise else ["x", "value"])
        for i, (x, v) in enumerate(zip(signal.x, signal.values)):
            row = [repr(float(x)), repr(float(v))]
            if has_noise:
                row.append(repr(float(signal.noise[i])))
            writer.writerow(row)


def read_signal_csv(path, rel_tol: float = 1e-6) -> SampledSignal:
    """Read a ``x,value[,noise]`` file; abscissae must be uniformly spaced.

    Lines starting with ``#`` are ignored.
    """
    path = Path(path)
    xs, vals, noise = [], [], []
    header = None
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cells = [c.strip() for c in line.split(",")]
            if header is None:
                header = cells
                if header[:2] != ["x", "value"] or header[2:] not in ([], ["noise"]):
                    raise SignalFormatError(
                        f"{path}:{lineno}: expected header 'x,value[,noise]', got {line!r}"
                    )
                continue
            if len(cells) != len(header):
                raise SignalFormatError(
                    f"{path}:{lineno}: expected {len(header)} columns, got {len(cells)}"
                )
            try:
                nums = [float(c) for c in cells]
            except ValueError:
                raise SignalFormatError(f"{path}:{lineno}: non-numeric cell in {line!r}") from None
            if not all(math.isfinite(v) for v in nums):
                raise SignalFormatError(f"{path}:{lineno}: non-finite value in {line!r}")
            xs.append(nums[0])
            vals.append(nums[1])
            if len(nums) == 3:
                noise.append(nums[2])
    if header is None or len(xs) < 2:
        raise SignalFormatError(f"{path}: need a header and at least two samples")
    x = np.array(xs)
    steps = np.diff(x)
    T_s = (x[-1] - x[0]) / (len(x) - 1)
    if T_s <= 0 or np.max(np.abs(steps - T_s)) > rel_tol * T_s:
        raise SignalFormatError(f"{path}: abscissae are not uniformly increasing")
    return SampledSignal(x[0], T_s, np.array(vals), np.array(noise) if noise else None)

