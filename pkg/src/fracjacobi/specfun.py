"""Special functions: Gamma, generalized binomials and Jacobi polynomials on [0, 1].

The Jacobi polynomials used throughout the package are the ones shifted to
the unit interval,

.. math::

    P_n^{(\\mu,\\kappa)}(t) = \\sum_{j=0}^{n} \\binom{n+\\mu}{j}
        \\binom{n+\\kappa}{n-j} (t-1)^{n-j} t^j,

orthogonal under the weight :math:`w(t) = (1-t)^\\mu t^\\kappa`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Absolute distance under which an argument is treated as an integer.
POLE_TOL = 1e-12

#: Largest polynomial degree for which double precision results are supported.
MAX_DEGREE = 20


class PoleError(ValueError):
    """Raised when Gamma is evaluated at a non-positive integer."""


def is_nonpositive_integer(x: float) -> bool:
    return x < 0.5 and abs(x - round(x)) <= POLE_TOL


def gamma(x: float) -> float:
    """Gamma function for real arguments.

    Raises :class:`PoleError` at (or within :data:`POLE_TOL` of) the poles
    ``0, -1, -2, ...``.
    """
    x = float(x)
    if is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at x={x!r}")
    return math.gamma(x)


def recip_gamma(x: float) -> float:
    """Reciprocal Gamma ``1/Gamma(x)``, an entire function (zero at the poles)."""
    x = float(x)
    if is_nonpositive_integer(x):
        return 0.0
    try:
        return 1.0 / math.gamma(x)
    except OverflowError:
        return 0.0


def gen_binom(a: float, k: int) -> float:
    """Generalized binomial coefficient ``binom(a, k)`` for real ``a``.

    Evaluated as the falling factorial ``a (a-1) ... (a-k+1) / k!``, which is
    the pole-free continuation of ``Gamma(a+1) / (Gamma(k+1) Gamma(a-k+1))``.
    In particular it is exactly zero when ``a`` is a non-negative integer
    smaller than ``k``.
    """
    if k < 0:
        return 0.0
    a = float(a)
    if abs(a - round(a)) <= POLE_TOL and 0 <= round(a) < k:
        return 0.0
    out = 1.0
    for m in range(k):
        out *= (a - m) / (m + 1)
    return out


@dataclass(frozen=True)
class JacobiParams:
    """Exponents of the Jacobi weight ``(1 - t)**mu * t**kappa``."""

    mu: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        for name in ("mu", "kappa"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > -1.0):
                raise ValueError(f"{name} must be > -1, got {v!r}")
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "kappa", float(self.kappa))

    def weight(self, t):
        t = np.asarray(t, dtype=float)
        return (1.0 - t) ** self.mu * t**self.kappa


def _check_degree(n: int) -> None:
    if n < 0:
        raise ValueError(f"polynomial degree must be >= 0, got {n}")
    if n > MAX_DEGREE:
        raise ValueError(f"degree {n} exceeds the supported maximum {MAX_DEGREE}")


def jacobi_eval(params: JacobiParams, n: int, t):
    """Evaluate ``P_n^{(mu, kappa)}`` on [0, 1] by its explicit double sum.

    ``t`` may be a scalar or an array; the result has the same shape.
    """
    _check_degree(n)
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    for j in range(n + 1):
        c = gen_binom(n + params.mu, j) * gen_binom(n + params.kappa, n - j)
        out = out + c * (t - 1.0) ** (n - j) * t**j
    return out if out.ndim else float(out)


def jacobi_monomial_coeffs(params: JacobiParams, n: int) -> np.ndarray:
    """Power-basis coefficients of ``P_n``: ``P_n(t) = sum_p coeffs[p] t**p``.

    Obtained by binomially expanding ``(t - 1)**(n - j)``; coefficient
    ``(-1)**l binom(n+mu, j) binom(n+kappa, n-j) binom(n-j, l)`` multiplies
    ``t**(n - l)``.
    """
    _check_degree(n)
    coeffs = np.zeros(n + 1)
    for j in range(n + 1):
        outer = gen_binom(n + params.mu, j) * gen_binom(n + params.kappa, n - j)
        for l in range(n - j + 1):
            coeffs[n - l] += (-1) ** l * outer * gen_binom(n - j, l)
    return coeffs


def jacobi_norm_sq(params: JacobiParams, n: int) -> float:
    """Squared weighted norm of ``P_n^{(mu, kappa)}`` on [0, 1]."""
    _check_degree(n)
    mu, kappa = params.mu, params.kappa
    s = mu + kappa + n + 1.0
    num = gamma(mu + n + 1) * gamma(kappa + n + 1)
    if abs(s) <= POLE_TOL:
        # n = 0, mu + kappa = -1: Gamma(s) * (n + s) = Gamma(s + 1) -> 1
        return num / gamma(n + 1)
    return num / (gamma(s) * gamma(n + 1) * (n + s))
