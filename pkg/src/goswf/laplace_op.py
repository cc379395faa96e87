"""The finite weighted bilateral Laplace transform and its composed kernel.

    F[g](x) = int_{-1}^{1} exp(c (x y - 1)) g(y) w(y) dy,   w = (1-y)^a (1+y)^b

``Q = F* F`` has kernel ``K(x, y) = exp(-2c) int exp(c t (x + y)) w(t) dt``,
which has a closed form through the Whittaker function M.
"""

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from .jacobi import WeightParams
from .quadrature import DEFAULT_QUAD_ORDER, QuadratureRule, gauss_jacobi
from .special_fn import whittaker_m

__all__ = [
    "OperatorParams",
    "SampledFunction",
    "sample",
    "apply_f",
    "apply_q",
    "kernel_k",
    "kernel_matrix",
    "nystrom_matrix",
    "fourier_matrix",
]


@dataclass(frozen=True)
class OperatorParams:
    weight: WeightParams
    c: float
    quad_order: int = DEFAULT_QUAD_ORDER

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"bandwidth c must be positive, got {self.c}")
        if self.quad_order < max(math.ceil(2 * math.e * self.c) + 1, 1):
            raise ValueError(
                f"quad_order={self.quad_order} is below ceil(2ec)+1 for c={self.c}"
            )

    @classmethod
    def make(cls, alpha, beta, c, quad_order=DEFAULT_QUAD_ORDER):
        return cls(WeightParams(float(alpha), float(beta)), float(c), int(quad_order))

    @cached_property
    def rule(self):
        return gauss_jacobi(self.weight, self.quad_order)

    def with_quad_order(self, quad_order):
        return OperatorParams(self.weight, self.c, int(quad_order))


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values of a function at the nodes of a quadrature rule."""

    rule: QuadratureRule
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.rule.order,):
            raise ValueError(
                f"expected {self.rule.order} node values, got shape {values.shape}"
            )
        object.__setattr__(self, "values", values)

    def norm(self):
        """L2 norm with respect to the rule's weight."""
        return math.sqrt(self.rule.integrate(self.values**2))


def sample(rule, func):
    """Sample a callable (or a constant) at the nodes of ``rule``."""
    if callable(func):
        values = np.asarray(func(rule.nodes), dtype=float)
        values = np.broadcast_to(values, rule.nodes.shape).copy()
    else:
        values = np.full(rule.order, float(func))
    return SampledFunction(rule, values)


def _check_compatible(op, g):
    if g.rule.params != op.weight:
        raise ValueError(
            f"sampled function lives on weight {g.rule.params}, operator uses {op.weight}"
        )


def apply_f(op, g, x):
    """F_c[g](x) by quadrature on the nodes that carry ``g``."""
    _check_compatible(op, g)
    x = np.asarray(x, dtype=float)
    y, w = g.rule.nodes, g.rule.weights
    kern = np.exp(op.c * (np.multiply.outer(x, y) - 1.0))
    return kern @ (w * g.values)


def _kernel_direct(op, s):
    rule = op.rule
    s = np.asarray(s, dtype=float)
    return np.exp(op.c * (np.multiply.outer(s, rule.nodes) - 2.0)) @ rule.weights


def _kernel_whittaker_scalar(op, s):
    a, b = op.weight.alpha, op.weight.beta
    mass = op.weight.total_mass
    if s == 0.0:
        return math.exp(-2.0 * op.c) * mass
    z = 2.0 * op.c * s
    m = whittaker_m((a - b) / 2.0, (a + b + 1) / 2.0, z)
    return math.exp(-2.0 * op.c) * mass * m / z ** ((a + b + 2) / 2.0)


def kernel_k(op, x, y, method="direct"):
    """Kernel of Q = F* F at (x, y); depends on x + y only.

    ``method="whittaker"`` uses the closed form for x + y > 0, the limit value
    at x + y = 0 and falls back to the quadrature for x + y < 0.
    """
    s = np.add(x, y, dtype=float)
    if np.any(np.abs(s) > 2.0):
        raise ValueError("kernel_k requires x, y in [-1, 1]")
    if method == "direct":
        return _kernel_direct(op, s)[()]
    if method != "whittaker":
        raise ValueError(f"unknown kernel method {method!r}")
    flat = np.atleast_1d(s).ravel()
    out = np.empty_like(flat)
    neg = flat < 0
    if np.any(neg):
        out[neg] = _kernel_direct(op, flat[neg])
    for i in np.flatnonzero(~neg):
        out[i] = _kernel_whittaker_scalar(op, flat[i])
    return out.reshape(np.shape(s))[()]


def kernel_matrix(op, x, y, method="direct"):
    return kernel_k(op, np.asarray(x)[:, None], np.asarray(y)[None, :], method)


def apply_q(op, g, x, method="direct"):
    """Q_c[g](x) = sum_j w_j K(x, y_j) g(y_j)."""
    _check_compatible(op, g)
    x = np.asarray(x, dtype=float)
    y, w = g.rule.nodes, g.rule.weights
    kern = kernel_k(op, np.multiply.outer(x, np.ones_like(y)), np.broadcast_to(y, x.shape + y.shape), method)
    return kern @ (w * g.values)


def nystrom_matrix(rule, c):
    """Symmetrized discretization sqrt(w_j w_k) exp(c (y_j y_k - 1))."""
    y, w = rule.nodes, rule.weights
    sw = np.sqrt(w)
    b = np.outer(sw, sw) * np.exp(c * (np.outer(y, y) - 1.0))
    # enforce exact symmetry (exp of y_j y_k vs y_k y_j can differ by an ulp)
    return np.triu(b) + np.triu(b, 1).T


def fourier_matrix(c_tilde, n_quad):
    """sqrt(w_j w_k) exp(i c~ y_j y_k) on the n_quad-point Gauss-Legendre rule.

    This is the imaginary-bandwidth (finite Fourier) case at alpha = beta = 0.
    The matrix is complex *symmetric*, not Hermitian; its eigenvalues are
    i^n |mu_n| with real eigenvectors.
    """
    if not c_tilde > 0:
        raise ValueError(f"c_tilde must be positive, got {c_tilde}")
    rule = gauss_jacobi(WeightParams(0.0, 0.0), n_quad)
    y, w = rule.nodes, rule.weights
    sw = np.sqrt(w)
    phase = c_tilde * np.outer(y, y)
    phase = np.triu(phase) + np.triu(phase, 1).T
    return np.outer(sw, sw) * np.exp(1j * phase)
