"""Gauss-Jacobi quadrature and the quadrature-order selector for the Nystrom solve."""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .eigencore import sym_eig
from .jacobi import WeightParams, eval_normalized_all, x_matrix
from .special_fn import ln_gamma

__all__ = [
    "QuadratureRule",
    "gauss_jacobi",
    "log_k_epsilon_bound",
    "k_epsilon",
    "working_order",
    "DEFAULT_QUAD_ORDER",
    "K_EPSILON_CAP",
]

DEFAULT_QUAD_ORDER = 40
K_EPSILON_CAP = 1000


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    params: WeightParams
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self):
        return len(self.nodes)

    def integrate(self, values):
        """Sum of ``weights * values`` over the last axis."""
        return np.asarray(values) @ self.weights


def gauss_jacobi(params, n):
    """n-point Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta.

    Nodes are the eigenvalues of the truncated Jacobi matrix (Golub-Welsch).
    Weights use the Christoffel form ``1 / sum_k P_k(y_j)^2`` rather than the
    squared first eigenvector component; it keeps full relative accuracy for
    the tiny weights near the endpoints.
    """
    if n < 1:
        raise ValueError(f"quadrature order must be >= 1, got {n}")
    return _gauss_jacobi(params, int(n))


@lru_cache(maxsize=256)
def _gauss_jacobi(params, n):
    nodes = sym_eig(x_matrix(params, n)).values.copy()
    # eigenvalues can land a few ulps outside [-1, 1] for extreme parameters
    np.clip(nodes, -1.0, 1.0, out=nodes)
    vals = eval_normalized_all(params, n - 1, nodes)
    weights = 1.0 / np.sum(vals**2, axis=0)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return QuadratureRule(params, nodes, weights)


def log_k_epsilon_bound(params, c, k):
    """log of the interpolation-error bound at quadrature order ``k``.

    e^{2c}/sqrt(2 k pi) * 2^{a+b+1} k! G(k+a+b+1) G(k+a+1) G(k+b+1)
                        / ((2k+a+b+1) G(2k+a+b+1)^2)
    """
    a, b = params.alpha, params.beta
    s = a + b
    return (
        2.0 * c
        - 0.5 * math.log(2.0 * k * math.pi)
        + (s + 1) * math.log(2.0)
        + ln_gamma(k + 1)
        + ln_gamma(k + s + 1)
        + ln_gamma(k + a + 1)
        + ln_gamma(k + b + 1)
        - math.log(2 * k + s + 1)
        - 2.0 * ln_gamma(2 * k + s + 1)
    )


def k_epsilon(params, c, epsilon, mu_abs, cap=K_EPSILON_CAP):
    """Smallest K >= 1 whose bound is <= epsilon * mu_abs."""
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not mu_abs > 0:
        raise ValueError(f"mu_abs must be positive, got {mu_abs}")
    target = math.log(epsilon) + math.log(mu_abs)
    for k in range(1, cap + 1):
        if log_k_epsilon_bound(params, c, k) <= target:
            return k
    raise ValueError(
        f"accuracy epsilon={epsilon} at |mu|={mu_abs} needs more than {cap} nodes"
    )


def working_order(params, c, epsilon, mu_abs, cap=K_EPSILON_CAP):
    """Recommended quadrature order max(ceil(2ec) + 1, K_epsilon)."""
    return max(math.ceil(2 * math.e * c) + 1, k_epsilon(params, c, epsilon, mu_abs, cap))
