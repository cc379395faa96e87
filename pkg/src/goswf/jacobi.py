"""Orthonormal Jacobi polynomials on (-1, 1) with weight (1-x)^alpha (1+x)^beta.

Everything here works with the normalized family ``P_n / sqrt(a_n)`` so that
the matrices of multiplication by ``x`` and ``x**2`` are symmetric.
"""

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from .special_fn import ln_beta, ln_gamma

__all__ = [
    "WeightParams",
    "JacobiRecurrence",
    "log_a_norm",
    "a_norm",
    "leading_coeff",
    "recurrence",
    "x_action",
    "x_squared_action",
    "chi_zero",
    "eval_normalized",
    "eval_normalized_all",
    "eval_derivative",
    "eval_series",
    "x_matrix",
    "x_squared_matrix",
]


@dataclass(frozen=True)
class WeightParams:
    """Exponents of the Jacobi weight ``(1-x)**alpha * (1+x)**beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise ValueError(
                f"Jacobi weight needs alpha, beta > -1, got ({self.alpha}, {self.beta})"
            )

    @cached_property
    def total_mass(self):
        """Integral of the weight over (-1, 1): 2^(a+b+1) B(a+1, b+1)."""
        a, b = self.alpha, self.beta
        return math.exp((a + b + 1) * math.log(2.0) + ln_beta(a + 1, b + 1))

    def weight(self, x):
        x = np.asarray(x, dtype=float)
        return (1 - x) ** self.alpha * (1 + x) ** self.beta

    def shifted(self, m=1):
        return WeightParams(self.alpha + m, self.beta + m)


def log_a_norm(params, n):
    """log of the squared norm a_n of the classical P_n^{(alpha, beta)}."""
    a, b = params.alpha, params.beta
    s = a + b
    if n == 0:
        # Gamma(n+s+1) (2n+s+1) -> Gamma(s+2) as one factor; safe for s = -1
        return (s + 1) * math.log(2.0) + ln_gamma(a + 1) + ln_gamma(b + 1) - ln_gamma(s + 2)
    return (
        (s + 1) * math.log(2.0)
        + ln_gamma(n + a + 1)
        + ln_gamma(n + b + 1)
        - ln_gamma(n + 1)
        - math.log(2 * n + s + 1)
        - ln_gamma(n + s + 1)
    )


def a_norm(params, n):
    return math.exp(log_a_norm(params, n))


def leading_coeff(params, n):
    """Leading coefficient k_n of the classical (unnormalized) P_n^{(alpha, beta)}."""
    s = params.alpha + params.beta
    if n == 0:
        return 1.0
    return math.exp(
        ln_gamma(2 * n + s + 1) - n * math.log(2.0) - ln_gamma(n + 1) - ln_gamma(n + s + 1)
    )


def _diag_coeff(a, b, k):
    s = a + b
    if k == 0:
        return (b - a) / (s + 2)
    return (b * b - a * a) / ((2 * k + s) * (2 * k + s + 2))


def _offdiag_coeff(a, b, k):
    # coefficient linking P_k and P_{k+1}
    s = a + b
    if k == 0:
        return 2.0 / (s + 2) * math.sqrt((a + 1) * (b + 1) / (s + 3))
    num = (k + 1) * (k + a + 1) * (k + b + 1) * (k + s + 1)
    den = (2 * k + s + 1) * (2 * k + s + 3)
    return 2.0 / (2 * k + s + 2) * math.sqrt(num / den)


@dataclass(frozen=True)
class JacobiRecurrence:
    """Recurrence data at one order ``n``.

    ``P_{n+1} = (cap_A x - cap_B) P_n - cap_C P_{n-1}`` for the normalized
    polynomials, equivalently
    ``x P_n = lower_alpha P_{n+1} + lower_beta P_n + lower_gamma P_{n-1}``.
    """

    order: int
    a_norm: float
    cap_A: float
    cap_B: float
    cap_C: float
    lower_alpha: float
    lower_beta: float
    lower_gamma: float
    leading_coeff: float

    def __post_init__(self):
        if self.a_norm <= 0:
            raise ValueError("a_norm must be positive")


def recurrence(params, n):
    """Recurrence coefficients for order ``n >= 0``.

    The symmetric (lower-case) coefficients are computed from closed forms that
    stay finite at the removable singularities of the textbook ``A_n, B_n, C_n``
    (e.g. ``alpha + beta = 0`` or ``-1`` at ``n = 0``); the capital ones follow.
    """
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    a, b = params.alpha, params.beta
    lo_a = _offdiag_coeff(a, b, n)
    lo_b = _diag_coeff(a, b, n)
    lo_g = _offdiag_coeff(a, b, n - 1) if n > 0 else 0.0
    cap_A = 1.0 / lo_a
    return JacobiRecurrence(
        order=n,
        a_norm=a_norm(params, n),
        cap_A=cap_A,
        cap_B=lo_b * cap_A,
        cap_C=lo_g * cap_A,
        lower_alpha=lo_a,
        lower_beta=lo_b,
        lower_gamma=lo_g,
        leading_coeff=leading_coeff(params, n),
    )


def x_action(params, k):
    """Coefficients (alpha_k, beta_k, gamma_k) of x P_k on P_{k+1}, P_k, P_{k-1}."""
    if k < 0:
        raise ValueError(f"index must be >= 0, got {k}")
    a, b = params.alpha, params.beta
    gamma = _offdiag_coeff(a, b, k - 1) if k > 0 else 0.0
    return _offdiag_coeff(a, b, k), _diag_coeff(a, b, k), gamma


def x_squared_action(params, k):
    """Coefficients of x^2 P_k on P_{k+2}, P_{k+1}, P_k, P_{k-1}, P_{k-2}."""
    al, be, ga = x_action(params, k)
    al1, be1, ga1 = x_action(params, k + 1)
    if k >= 1:
        alm, bem, gam = x_action(params, k - 1)
    else:
        alm = bem = gam = 0.0
    return (
        al * al1,
        al * (be1 + be),
        al * ga1 + be * be + ga * alm,
        ga * (be + bem),
        ga * gam,
    )


def chi_zero(params, k):
    """Eigenvalue k(k + alpha + beta + 1) of the Jacobi differential operator."""
    return k * (k + params.alpha + params.beta + 1)


def _check_domain(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("Jacobi evaluation requires x in [-1, 1]")
    return x


def _recurrence_arrays(params, n):
    a, b = params.alpha, params.beta
    off = np.array([_offdiag_coeff(a, b, k) for k in range(n + 1)])
    diag = np.array([_diag_coeff(a, b, k) for k in range(n + 1)])
    return off, diag


def eval_normalized_all(params, n_max, x):
    """Values of P_0 .. P_{n_max} at ``x``; shape ``(n_max + 1,) + x.shape``."""
    x = _check_domain(x)
    off, diag = _recurrence_arrays(params, n_max)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = math.exp(-0.5 * log_a_norm(params, 0))
    if n_max >= 1:
        out[1] = (x - diag[0]) * out[0] / off[0]
    for k in range(1, n_max):
        out[k + 1] = ((x - diag[k]) * out[k] - off[k - 1] * out[k - 1]) / off[k]
    return out


def eval_normalized(params, n, x):
    """Orthonormal Jacobi polynomial P_n(x) via upward recurrence."""
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    return eval_normalized_all(params, n, x)[n]


def _derivative_factor(params, n, m):
    # d^m/dx^m P_n = factor * P_{n-m}^{(alpha+m, beta+m)}, both orthonormal
    s = params.alpha + params.beta
    log_f = ln_gamma(n + s + 1 + m) - ln_gamma(n + s + 1) - m * math.log(2.0)
    log_f += 0.5 * (log_a_norm(params.shifted(m), n - m) - log_a_norm(params, n))
    return math.exp(log_f)


def eval_derivative(params, n, x, order=1):
    """``order``-th derivative of P_n at ``x`` via the shifted-parameter identity."""
    x = _check_domain(x)
    if order == 0:
        return eval_normalized(params, n, x)
    if n < order:
        return np.zeros_like(x)[()]
    shifted = params.shifted(order)
    return _derivative_factor(params, n, order) * eval_normalized(shifted, n - order, x)


def eval_series(params, coeffs, x, order=0):
    """Evaluate ``sum_k coeffs[k] * d^order/dx^order P_k(x)``.

    Uses Clenshaw's backward recurrence. Derivatives are handled by rewriting the
    series in the orthonormal basis with parameters shifted by ``order``.
    """
    x = _check_domain(x)
    coeffs = np.asarray(coeffs, dtype=float)
    if order:
        factors = np.array(
            [_derivative_factor(params, k, order) for k in range(order, len(coeffs))]
        )
        coeffs = coeffs[order:] * factors
        params = params.shifted(order)
    n = len(coeffs)
    if n == 0:
        return np.zeros_like(x)[()]
    off, diag = _recurrence_arrays(params, n)
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for k in range(n - 1, -1, -1):
        b0 = coeffs[k] + (x - diag[k]) / off[k] * b1 - off[k] / off[k + 1] * b2
        b2, b1 = b1, b0
    return b1 * math.exp(-0.5 * log_a_norm(params, 0))


def x_matrix(params, size):
    """Symmetric tridiagonal matrix of multiplication by x on P_0 .. P_{size-1}."""
    m = np.zeros((size, size))
    for k in range(size):
        al, be, _ = x_action(params, k)
        m[k, k] = be
        if k + 1 < size:
            m[k, k + 1] = m[k + 1, k] = al
    return m


def x_squared_matrix(params, size):
    """Pentadiagonal matrix of multiplication by x^2 (exact Galerkin projection)."""
    m = np.zeros((size, size))
    for k in range(size):
        c2, c1, c0, _, _ = x_squared_action(params, k)
        m[k, k] = c0
        if k + 1 < size:
            m[k, k + 1] = m[k + 1, k] = c1
        if k + 2 < size:
            m[k, k + 2] = m[k + 2, k] = c2
    return m
