"""Gamma, Beta, Kummer and Whittaker functions (real arguments only)."""

import math

__all__ = [
    "PrecisionError",
    "ln_gamma",
    "beta_fn",
    "ln_beta",
    "kummer_m",
    "whittaker_m",
]

KUMMER_MAX_TERMS = 500
KUMMER_RTOL = 1e-16


class PrecisionError(ArithmeticError):
    """A numerical procedure could not reach its accuracy target.

    ``residual`` carries the last convergence measure observed.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


def ln_gamma(x):
    """log Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"ln_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def ln_beta(a, b):
    if not (a > 0 and b > 0):
        raise ValueError(f"beta_fn requires a, b > 0, got ({a!r}, {b!r})")
    # sorted so that B(a, b) and B(b, a) round identically
    lo, hi = sorted((a, b))
    return ln_gamma(lo) + ln_gamma(hi) - ln_gamma(lo + hi)


def beta_fn(a, b):
    """Euler Beta function Gamma(a) Gamma(b) / Gamma(a + b)."""
    return math.exp(ln_beta(a, b))


def kummer_m(a, b, z, max_terms=KUMMER_MAX_TERMS):
    """Kummer's confluent hypergeometric function M(a, b, z) = 1F1(a; b; z).

    Summed directly from its Taylor series. Intended for moderate ``|z|``
    (the kernel only needs ``0 <= z <= 4c``); for large negative ``z`` the
    alternating series loses accuracy and the Kummer transformation
    ``M(a, b, z) = e^z M(b - a, b, -z)`` should be applied by the caller.

    Raises
    ------
    ValueError
        If ``b`` is zero or a negative integer.
    PrecisionError
        If ``max_terms`` terms are summed without convergence.
    """
    if b <= 0 and float(b).is_integer():
        raise ValueError(f"kummer_m undefined for b = {b!r}")
    total = 1.0
    term = 1.0
    for k in range(max_terms):
        term *= (a + k) * z / ((b + k) * (k + 1))
        total += term
        if term == 0.0 or abs(term) < KUMMER_RTOL * abs(total):
            return total
    residual = abs(term / total) if total else math.inf
    raise PrecisionError(
        f"kummer_m({a}, {b}, {z}) did not converge in {max_terms} terms",
        residual=residual,
    )


def whittaker_m(lam, mu, z):
    """Whittaker function M_{lam,mu}(z) for real z > 0.

    M_{lam,mu}(z) = exp(-z/2) z^(1/2 + mu) M(1/2 + mu - lam, 1 + 2 mu, z)
    """
    if not z > 0:
        raise ValueError(f"whittaker_m requires z > 0, got {z!r}")
    m = kummer_m(0.5 + mu - lam, 1.0 + 2.0 * mu, z)
    return math.exp(-0.5 * z + (0.5 + mu) * math.log(z)) * m
