"""Reference Riemann-Liouville derivatives (lower terminal 0).

Two independent routes are provided so they can check each other: closed
forms built from the power rule

    d^alpha/dx^alpha x^n = Gamma(n + 1) / Gamma(n + 1 - alpha) x^(n - alpha),

and a quadrature of the Caputo-type rearrangement of the defining integral.
"""

from __future__ import annotations

import decimal
import math
from decimal import Decimal
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import simpson

from .kernel import as_order
from .specfun import gamma, is_nonpositive_integer, recip_gamma

_SERIES_DIGITS = 40


def _check_x(x: float) -> float:
    x = float(x)
    if not x > 0:
        raise ValueError(f"Riemann-Liouville derivatives with terminal 0 need x > 0, got {x}")
    return x


def rl_monomial(n: float, order, x: float) -> float:
    """Derivative of ``x**n``.

    ``n`` may be any real ``> -1``; for non-integer ``n`` this is the usual
    extension of the power rule.
    """
    order = as_order(order)
    x = _check_x(x)
    r = recip_gamma(n + 1 - order.alpha)
    if r == 0.0:
        return 0.0
    return gamma(n + 1) * r * x ** (n - order.alpha)


def rl_polynomial(coeffs: Sequence[float], order, x: float) -> float:
    """Derivative of ``sum_k coeffs[k] x**k``."""
    order = as_order(order)
    x = _check_x(x)
    return math.fsum(c * rl_monomial(k, order, x) for k, c in enumerate(coeffs) if c != 0)


def _sin_series_sum(omega: float, alpha: float, x: float, terms: int) -> tuple:
    # sum_k (-1)^k omega^(2k+1) x^(2k+1-alpha) / Gamma(2k+2-alpha), k = 0..terms.
    # The leading nonzero term is formed in floating point; the rest are its
    # exact rational multiples -(omega x)^2 / ((p-2)(p-1)), p = 2k+2-alpha,
    # summed in decimal so the cancellation between terms of size exp(omega x)
    # costs nothing. Returns (sum, |last term| / |largest term|).
    k0 = 0
    while k0 <= terms and is_nonpositive_integer(2 * k0 + 2 - alpha):
        k0 += 1
    if k0 > terms:
        return 0.0, 0.0
    lead = (-1) ** k0 * omega ** (2 * k0 + 1) * x ** (2 * k0 + 1 - alpha) * recip_gamma(2 * k0 + 2 - alpha)
    with decimal.localcontext() as ctx:
        ctx.prec = _SERIES_DIGITS
        z2 = (Decimal(omega) * Decimal(x)) ** 2
        a = Decimal(alpha)
        term = Decimal(1)
        total = Decimal(1)
        biggest = Decimal(1)
        for k in range(k0 + 1, terms + 1):
            p = 2 * k + 2 - a
            term = -term * z2 / ((p - 2) * (p - 1))
            total += term
            biggest = max(biggest, abs(term))
        rel_tail = float(abs(term) / biggest)
        return float(total) * lead, rel_tail


def default_sin_terms(omega: float, x: float) -> int:
    """A term count for which the Maclaurin tail of ``sin(omega x)`` is negligible."""
    z = abs(omega) * x
    return int(math.ceil(1.5 * z + 40))


def rl_series_sin(omega: float, order, x: float, terms: int | None = None) -> float:
    """Derivative of ``sin(omega x)`` by the power rule applied to its Maclaurin series.

    Terms are accumulated in 40-digit decimal arithmetic, so the result is
    accurate to a few units in the last place even where the individual
    terms reach ``exp(omega x)``.
    """
    order = as_order(order)
    x = _check_x(x)
    if terms is None:
        terms = default_sin_terms(omega, x)
    total, rel_tail = _sin_series_sum(omega, order.alpha, x, terms)
    if rel_tail > 1e-30:
        raise ValueError(
            f"{terms} terms do not resolve the series at omega*x={omega * x}; increase terms"
        )
    return total


def rl_caputo_quad(
    f: Callable,
    f_deriv_l: Callable,
    derivs_at_0: Sequence[float],
    order,
    x: float,
    panels: int = 20_000,
) -> float:
    """Derivative of ``f`` from its ``l``-th derivative by quadrature.

    Uses

        sum_{k<l} f^(k)(0) x^(k-alpha) / Gamma(k+1-alpha)
          + 1/Gamma(l-alpha) int_0^x (x-s)^(l-alpha-1) f^(l)(s) ds,

    where the weakly singular integral is mapped by ``x - s = u**(1/(l-alpha))``
    to ``1/(l-alpha) int_0^{x^(l-alpha)} f^(l)(x - u^(1/(l-alpha))) du`` and
    then integrated with composite Simpson. ``f`` itself is only
    evaluated when ``alpha = 0``.
    """
    order = as_order(order)
    x = _check_x(x)
    if panels < 16:
        raise ValueError(f"need at least 16 panels, got {panels}")
    alpha, l = order.alpha, order.l
    if alpha == 0:
        return float(f(x))
    if len(derivs_at_0) < l:
        raise ValueError(f"need f^(k)(0) for k < {l}, got {len(derivs_at_0)} values")
    head = math.fsum(
        derivs_at_0[k] * recip_gamma(k + 1 - alpha) * x ** (k - alpha) for k in range(l)
    )
    nu = l - alpha
    upper = x**nu
    u = np.linspace(0.0, upper, panels + 1)
    s = x - u ** (1.0 / nu)
    g = np.asarray(f_deriv_l(np.maximum(s, 0.0)), dtype=float)
    g = np.broadcast_to(g, u.shape)
    integral = simpson(g, x=u) / nu
    return head + integral / gamma(nu)
