"""Convolution kernels of the Jacobi differentiators.

Both kernels are sampled on the uniform grid ``tau_j = j / M`` together with
quadrature weights, so that applying a kernel to ``M + 1`` samples of a signal
is a single dot product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli

from .specfun import (
    POLE_TOL,
    JacobiParams,
    gamma,
    jacobi_eval,
    jacobi_monomial_coeffs,
    jacobi_norm_sq,
    recip_gamma,
)

QUADRATURE_RULES = ("gregory", "trapezoid")

#: Number of corrected weights at each end of the Gregory rule.
GREGORY_POINTS = 5


@dataclass(frozen=True)
class DiffOrder:
    """Derivative order ``alpha >= 0`` and the integer ``l`` with ``l - 1 <= alpha < l``."""

    alpha: float
    l: int = field(init=False)

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a) or a < 0:
            raise ValueError(f"derivative order must be a finite number >= 0, got {self.alpha!r}")
        if abs(a - round(a)) <= POLE_TOL:
            a = float(round(a))
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "l", int(math.floor(a)) + 1)

    @property
    def is_integer(self) -> bool:
        return self.alpha == int(self.alpha)


def as_order(order) -> DiffOrder:
    return order if isinstance(order, DiffOrder) else DiffOrder(order)


@lru_cache(maxsize=None)
def _gregory_end_weights(m: int) -> tuple:
    # Corrections d_j to the trapezoid end weights cancel the Euler-Maclaurin
    # terms up to degree m - 1: sum_j d_j j**r = B_{r+1} / (r + 1) for odd r, else 0.
    if m == 1:
        return (0.5,)
    b = bernoulli(m)
    A = np.array([[float(j) ** r for j in range(m)] for r in range(m)])
    A[0, 0] = 1.0
    rhs = np.array([b[r + 1] / (r + 1) if r % 2 == 1 else 0.0 for r in range(m)])
    d = np.linalg.solve(A, rhs)
    base = np.ones(m)
    base[0] = 0.5
    return tuple(base + d)


@lru_cache(maxsize=64)
def quad_weights(M: int, rule: str = "gregory") -> np.ndarray:
    """Weights for integrating over [0, 1] from the samples at ``j / M``, ``j = 0..M``.

    ``"trapezoid"`` is the composite trapezoid rule (``1/M`` inside, ``1/(2M)``
    at both ends). ``"gregory"`` keeps the trapezoid interior and corrects up
    to :data:`GREGORY_POINTS` weights at each end, which raises the order of
    accuracy for smooth integrands from 2 to about ``GREGORY_POINTS + 1``.
    Short grids fall back to fewer corrections.
    """
    if M < 1:
        raise ValueError(f"need at least one panel, got M={M}")
    if rule not in QUADRATURE_RULES:
        raise ValueError(f"unknown quadrature rule {rule!r}; choose from {QUADRATURE_RULES}")
    m = 1 if rule == "trapezoid" else max(1, min(GREGORY_POINTS, (M + 1) // 2))
    w = np.ones(M + 1)
    ends = np.array(_gregory_end_weights(m))
    w[:m] = ends
    w[M + 1 - m :] = ends[::-1]
    w /= M
    w.setflags(write=False)
    return w


@lru_cache(maxsize=256)
def _frac_deriv_matrix(params: JacobiParams, alpha: float, N: int) -> np.ndarray:
    # G[i, p] multiplies t**(p - alpha) in the alpha-derivative of P_i.
    G = np.zeros((N + 1, N + 1))
    for i in range(N + 1):
        coeffs = jacobi_monomial_coeffs(params, i)
        for p in range(i + 1):
            g = math.gamma(p + 1) * recip_gamma(p + 1 - alpha)
            G[i, p] = coeffs[p] * g
    G.setflags(write=False)
    return G


def frac_deriv_table(params: JacobiParams, order, N: int, t) -> np.ndarray:
    """Riemann-Liouville derivatives of ``P_0 .. P_N`` at ``t``; shape ``(N + 1,) + t.shape``."""
    order = as_order(order)
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("fractional derivatives of Jacobi polynomials need t > 0")
    if order.alpha == 0:
        return np.array([jacobi_eval(params, i, t) for i in range(N + 1)])
    G = _frac_deriv_matrix(params, order.alpha, N)
    powers = np.stack([t ** (p - order.alpha) for p in range(N + 1)])
    return np.tensordot(G, powers, axes=1)


def frac_deriv_jacobi(params: JacobiParams, n: int, order, t):
    """Order-``alpha`` Riemann-Liouville derivative (terminal 0) of ``P_n`` at ``t > 0``."""
    out = frac_deriv_table(params, order, n, t)[n]
    return out if out.ndim else float(out)


@dataclass(frozen=True, eq=False)
class KernelTable:
    """A kernel sampled on ``tau_j = j / M`` plus matching quadrature weights."""

    params: JacobiParams
    order: DiffOrder
    N: int
    t: float
    grid: np.ndarray
    values: np.ndarray
    quad_weights: np.ndarray
    rule: str = "gregory"

    def __post_init__(self):
        if not (len(self.values) == len(self.grid) == len(self.quad_weights)):
            raise ValueError("kernel values, grid and weights must have equal lengths")
        if not np.all(np.isfinite(self.values)):
            raise FloatingPointError("kernel contains non-finite values")
        for arr in (self.grid, self.values, self.quad_weights):
            arr.setflags(write=False)

    @property
    def M(self) -> int:
        return len(self.grid) - 1

    @property
    def taps(self) -> np.ndarray:
        """Quadrature weight times kernel value, i.e. the discrete convolution filter."""
        return self.quad_weights * self.values

    def integrate(self, samples) -> float:
        """Quadrature of ``Q(tau, t) * y(tau)`` over [0, 1] given ``y`` at the grid."""
        samples = np.asarray(samples, dtype=float)
        if samples.shape != self.grid.shape:
            raise ValueError(f"expected {len(self.grid)} samples, got {samples.shape}")
        return float(np.dot(self.taps, samples))


def _check_kernel_args(params: JacobiParams, N: int, M: int) -> None:
    if params.mu < 0 or params.kappa < 0:
        raise ValueError(
            f"weight exponents mu={params.mu}, kappa={params.kappa}: negative exponents make "
            "the weight singular at an endpoint and the uniform-grid quadrature invalid"
        )
    if N < 0:
        raise ValueError(f"truncation order must be >= 0, got {N}")
    if M < max(N, 1):
        raise ValueError(f"need M >= N samples intervals, got M={M}, N={N}")


@lru_cache(maxsize=16)
def _projection_basis(params: JacobiParams, N: int, M: int) -> np.ndarray:
    # B[i, j] = w(tau_j) P_i(tau_j) / ||P_i||^2
    tau = np.arange(M + 1) / M
    w = params.weight(tau)
    B = np.array([w * jacobi_eval(params, i, tau) / jacobi_norm_sq(params, i) for i in range(N + 1)])
    B.setflags(write=False)
    return B


@lru_cache(maxsize=8192)
def build_fractional_kernel(
    params: JacobiParams, order, N: int, t: float, M: int, rule: str = "gregory"
) -> KernelTable:
    """Fractional Jacobi kernel ``Q_{mu,kappa,alpha,N}(tau_j, t)`` for ``t`` in (0, 1].

    Tables are cached per argument tuple and immutable.
    """
    order = as_order(order)
    _check_kernel_args(params, N, M)
    t = float(t)
    if not 0 < t <= 1:
        raise ValueError(f"evaluation abscissa t must lie in (0, 1], got {t}")
    q = frac_deriv_table(params, order, N, t)
    values = q @ _projection_basis(params, N, M)
    return KernelTable(
        params=params,
        order=order,
        N=N,
        t=t,
        grid=np.arange(M + 1) / M,
        values=values,
        quad_weights=quad_weights(M, rule),
        rule=rule,
    )


def integer_kernel_coeff(params: JacobiParams, n: int, i: int) -> float:
    """Coefficient ``C_{mu,kappa,n,i}`` of the integer-order kernel."""
    mu, kappa = params.mu, params.kappa
    return (
        (mu + kappa + 2 * n + 2 * i + 1)
        * gamma(mu + kappa + 2 * n + i + 1)
        * gamma(n + i + 1)
        / (gamma(kappa + n + i + 1) * gamma(mu + n + i + 1))
    )


@lru_cache(maxsize=1024)
def build_integer_kernel(
    params: JacobiParams, n: int, N: int, t: float, M: int, rule: str = "gregory"
) -> KernelTable:
    """Integer-order kernel ``Q_{mu,kappa,n,N}(tau_j, t)`` for ``t`` in [0, 1]."""
    if n < 0:
        raise ValueError(f"derivative order must be >= 0, got {n}")
    if N < n:
        raise ValueError(f"truncation order N={N} is below the derivative order n={n}")
    _check_kernel_args(params, N, M)
    t = float(t)
    if not 0 <= t <= 1:
        raise ValueError(f"evaluation abscissa t must lie in [0, 1], got {t}")
    tau = np.arange(M + 1) / M
    shifted = JacobiParams(params.mu + n, params.kappa + n)
    values = np.zeros(M + 1)
    for i in range(N - n + 1):
        c = integer_kernel_coeff(params, n, i) * jacobi_eval(shifted, i, t)
        values += c * jacobi_eval(params, n + i, tau)
    values *= params.weight(tau)
    return KernelTable(
        params=params,
        order=DiffOrder(n),
        N=N,
        t=t,
        grid=tau,
        values=values,
        quad_weights=quad_weights(M, rule),
        rule=rule,
    )
