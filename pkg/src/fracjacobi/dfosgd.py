"""Digital fractional-order Savitzky-Golay differentiator (comparison baseline).

One polynomial of degree ``N`` is least-squares fitted over the whole record,
using every ``theta``-th sample against the integer abscissa ``s = i + 1``;
the order-``alpha`` estimate at sample ``i`` is the power-rule derivative of
that polynomial at ``s = i + 1``, divided by ``T_s**alpha``.

The printed normal-equation form ``(X^T X)^{-1} X^T Y`` is never formed: at
``N = 14`` and ``M = 1000`` the design holds entries near ``1001**14``. The
fit is done by QR on the equilibrated design, whose columns are the
monomials of ``u = (s - center) / half`` in [-1, 1]. That is a change of
basis for the same polynomial space, so it solves the same least-squares
problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import solve_triangular

from .differentiator import EstimateSeries
from .errors import NumericalError
from .kernel import DiffOrder, as_order
from .signals import SampledSignal
from .specfun import recip_gamma


@dataclass(frozen=True)
class DfosgdConfig:
    N: int = 14
    theta: int = 5
    order: DiffOrder = field(default_factory=lambda: DiffOrder(0.5))

    def __post_init__(self):
        object.__setattr__(self, "order", as_order(self.order))
        if self.N < 0:
            raise ValueError(f"fit degree N must be >= 0, got {self.N}")
        if self.theta < 1:
            raise ValueError(f"subsampling stride theta must be >= 1, got {self.theta}")


def sample_indices(M: int, theta: int) -> np.ndarray:
    """Indices ``0, theta, 2 theta, ...`` of the fitted samples, always ending at ``M``."""
    idx = np.arange(0, M + 1, theta)
    if idx[-1] != M:
        idx = np.append(idx, M)
    return idx


def build_design(M: int, theta: int, N: int) -> np.ndarray:
    """Vandermonde rows ``[1, s, ..., s**N]`` at ``s = 1 + i`` for the fitted indices."""
    if M < 0 or theta < 1 or N < 0:
        raise ValueError(f"invalid design arguments M={M}, theta={theta}, N={N}")
    s = sample_indices(M, theta) + 1.0
    if s.size < N + 1:
        raise ValueError(
            f"{s.size} fitted samples cannot determine a degree-{N} polynomial"
        )
    return s[:, None] ** np.arange(N + 1)


def _basis_map(s: np.ndarray, equilibrate: bool) -> tuple:
    # (center, half): the fit uses monomials of u = (s - center) / half, which
    # lies in [-1, 1] when equilibrated and is s itself otherwise
    if not equilibrate:
        return 0.0, 1.0
    lo, hi = float(np.min(s)), float(np.max(s))
    half = (hi - lo) / 2
    return (lo + hi) / 2, half if half > 0 else max(abs(hi), 1.0)


def _factor(s: np.ndarray, N: int, equilibrate: bool):
    center, half = _basis_map(s, equilibrate)
    X = ((s[:, None] - center) / half) ** np.arange(N + 1)
    Q, R = np.linalg.qr(X)
    diag = np.abs(np.diag(R))
    if diag.size and diag.min() <= X.shape[0] * np.finfo(float).eps * diag.max():
        raise NumericalError(
            f"degree-{N} design on {s.size} abscissae in [{s.min()}, {s.max()}] is rank deficient"
        )
    return Q, R, center, half


@dataclass(frozen=True, eq=False)
class DfosgdFit:
    """Fitted polynomial ``p(s) = sum_k scaled[k] ((s - center) / half)**k``."""

    scaled: np.ndarray
    center: float = 0.0
    half: float = 1.0

    @property
    def coeffs(self) -> np.ndarray:
        """Monomial coefficients in ``s``.

        Expanding around ``s = 0`` cancels heavily at high degree; the
        scaled form is what the estimator uses.
        """
        lo, hi = self.center - self.half, self.center + self.half
        p = np.polynomial.Polynomial(self.scaled, domain=[lo, hi], window=[-1, 1])
        c = p.convert().coef
        return np.pad(c, (0, self.scaled.size - c.size))

    def __call__(self, s):
        u = (np.asarray(s, dtype=float) - self.center) / self.half
        return np.polynomial.polynomial.polyval(u, self.scaled)


def fit(signal: SampledSignal, config: DfosgdConfig, equilibrate: bool = True) -> DfosgdFit:
    idx = sample_indices(signal.M, config.theta)
    if idx.size < config.N + 1:
        raise ValueError(
            f"{idx.size} fitted samples cannot determine a degree-{config.N} polynomial"
        )
    Q, R, center, half = _factor(idx + 1.0, config.N, equilibrate)
    return DfosgdFit(solve_triangular(R, Q.T @ signal.values[idx]), center, half)


def derivative_weights(order, N: int, s: np.ndarray, center: float = 0.0, half: float = 1.0) -> np.ndarray:
    """Order-``alpha`` derivatives (terminal ``s = 0``) of ``((s - center) / half)**j``, ``j = 0..N``.

    Each basis function is expanded binomially into powers of ``s``, which
    are differentiated by the power rule ``Gamma(k+1)/Gamma(k+1-alpha) s**(k-alpha)``.
    """
    order = as_order(order)
    alpha = order.alpha
    s = np.asarray(s, dtype=float)
    if alpha == 0:
        return ((s[:, None] - center) / half) ** np.arange(N + 1)
    g = np.array([math.gamma(k + 1) * recip_gamma(k + 1 - alpha) for k in range(N + 1)])
    powers = (s[:, None] / half) ** np.arange(N + 1) * g
    shift = -center / half
    out = np.zeros((s.size, N + 1))
    for j in range(N + 1):
        for k in range(j + 1):
            out[:, j] += math.comb(j, k) * shift ** (j - k) * powers[:, k]
    return out * s[:, None] ** (-alpha)


@lru_cache(maxsize=64)
def filter_matrix(M: int, config: DfosgdConfig, equilibrate: bool = True) -> np.ndarray:
    """Linear map from the fitted samples ``y[sample_indices(M, theta)]`` to the
    order-``alpha`` estimates at ``s = 1 .. M + 1`` (before the ``T_s**-alpha`` factor).

    Precomputing it makes the estimator an explicit fixed filter, so it is
    linear in the data up to the rounding of one matrix-vector product.
    """
    idx = sample_indices(M, config.theta)
    if idx.size < config.N + 1:
        raise ValueError(
            f"{idx.size} fitted samples cannot determine a degree-{config.N} polynomial"
        )
    Q, R, center, half = _factor(idx + 1.0, config.N, equilibrate)
    B = derivative_weights(config.order, config.N, np.arange(M + 1) + 1.0, center, half)
    # B R^-1 by a triangular solve, never forming R^-1
    W = solve_triangular(R, B.T, trans="T").T @ Q.T
    W.setflags(write=False)
    return W


def estimate_series_dfosgd(
    signal: SampledSignal, config: DfosgdConfig, equilibrate: bool = True
) -> EstimateSeries:
    """Estimates at every sample ``x_0 .. x_M``."""
    W = filter_matrix(signal.M, config, equilibrate)
    y = signal.values[sample_indices(signal.M, config.theta)]
    values = (W @ y) / signal.T_s**config.order.alpha
    return EstimateSeries(signal.x, values, "global", config)
