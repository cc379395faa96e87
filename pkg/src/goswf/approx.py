"""GOSWF versus Jacobi truncated expansions of band-limited functions.

A band-limited function is f = F_c[g] for some g in L2(w). Index ``N`` of a
truncation always means the terms ``0 .. N`` (so ``N + 1`` coefficients).
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .jacobi import eval_normalized_all
from .laplace_op import SampledFunction, apply_f, sample
from .quadrature import gauss_jacobi

__all__ = [
    "BandlimitedFunction",
    "ApproxReport",
    "make_bandlimited",
    "goswf_expand",
    "jacobi_expand",
    "compare_truncations",
    "L2_ORDER",
    "SUP_GRID",
]

L2_ORDER = 60
SUP_GRID = 201


@dataclass(frozen=True, eq=False)
class BandlimitedFunction:
    op: object
    source: SampledFunction

    def __call__(self, x):
        return apply_f(self.op, self.source, x)

    @property
    def weight(self):
        return self.op.weight

    def source_norm(self):
        return self.source.norm()


def make_bandlimited(op, g):
    """Wrap f = F_c[g].

    ``g`` may be a number (constant function), a callable such as a
    ``numpy.polynomial.Polynomial``, or an array of values at the nodes of
    ``op.rule``.
    """
    rule = op.rule
    if isinstance(g, SampledFunction):
        source = g
    elif callable(g) or np.isscalar(g):
        source = sample(rule, g)
    else:
        source = SampledFunction(rule, np.asarray(g, dtype=float))
    return BandlimitedFunction(op, source)


def _l2_rule(weight, order=L2_ORDER):
    return gauss_jacobi(weight, order)


def _check_basis(f, basis):
    if isinstance(f, BandlimitedFunction) and (
        f.op.weight != basis.op.weight or f.op.c != basis.op.c
    ):
        raise ValueError("band-limited function and basis use different operator parameters")


def goswf_expand(f, basis, n_terms, rule=None):
    """Coefficients <f, psi_n> for n < n_terms (unit-norm psi_n)."""
    _check_basis(f, basis)
    if n_terms > basis.n_max:
        raise ValueError(f"basis holds {basis.n_max} functions, asked for {n_terms}")
    rule = rule or _l2_rule(basis.weight)
    fx = f(rule.nodes)
    psi = np.stack([basis.psi(n, rule.nodes) for n in range(n_terms)])
    return psi @ (rule.weights * fx)


def jacobi_expand(f, n_terms, weight=None, rule=None):
    """Coefficients <f, P_n> for n < n_terms. ``f`` may be any callable."""
    if weight is None:
        weight = f.weight
    rule = rule or _l2_rule(weight)
    fx = f(rule.nodes)
    return eval_normalized_all(weight, n_terms - 1, rule.nodes) @ (rule.weights * fx)


@dataclass
class ApproxReport:
    n_values: list
    goswf_err_l2: list = field(default_factory=list)
    jacobi_err_l2: list = field(default_factory=list)
    goswf_err_sup: list = field(default_factory=list)
    jacobi_err_sup: list = field(default_factory=list)
    goswf_err_l2_pythagoras: list = field(default_factory=list)
    goswf_tail_bound: list = field(default_factory=list)
    goswf_coeffs: np.ndarray = None
    jacobi_coeffs: np.ndarray = None
    coeff_bound: np.ndarray = None
    f_norm: float = math.nan
    g_norm: float = math.nan

    def as_rows(self):
        return [
            {
                "N": n,
                "goswf_err_l2": self.goswf_err_l2[i],
                "jacobi_err_l2": self.jacobi_err_l2[i],
                "goswf_err_sup": self.goswf_err_sup[i],
                "jacobi_err_sup": self.jacobi_err_sup[i],
                "goswf_err_l2_pythagoras": self.goswf_err_l2_pythagoras[i],
                "goswf_tail_bound": self.goswf_tail_bound[i],
            }
            for i, n in enumerate(self.n_values)
        ]


def compare_truncations(f, basis, n_list, tail_mu=None, grid_points=SUP_GRID):
    """Truncation errors of both expansions for each N in ``n_list``.

    ``tail_mu`` is the full eigenvalue sequence used for the tail bound
    ``(sum_{n>N} mu_n^2)^(1/2) ||g||``; it defaults to ``basis.mu``, which
    under-counts the tail when the basis is short.
    """
    _check_basis(f, basis)
    n_list = sorted(int(n) for n in n_list)
    n_terms = n_list[-1] + 1
    rule = _l2_rule(basis.weight)
    grid = np.linspace(-1.0, 1.0, grid_points)

    fq, fg = f(rule.nodes), f(grid)
    f_norm2 = float(rule.integrate(fq * fq))
    a = goswf_expand(f, basis, n_terms, rule)
    b = jacobi_expand(f, n_terms, basis.weight, rule)
    psi_q = np.stack([basis.psi(n, rule.nodes) for n in range(n_terms)])
    psi_g = np.stack([basis.psi(n, grid) for n in range(n_terms)])
    jac_q = eval_normalized_all(basis.weight, n_terms - 1, rule.nodes)
    jac_g = eval_normalized_all(basis.weight, n_terms - 1, grid)

    mu = np.asarray(basis.mu if tail_mu is None else tail_mu, dtype=float)
    g_norm = f.source_norm() if isinstance(f, BandlimitedFunction) else math.nan

    report = ApproxReport(n_values=n_list, f_norm=math.sqrt(f_norm2), g_norm=g_norm)
    for n in n_list:
        k = n + 1
        rg = fq - a[:k] @ psi_q[:k]
        rj = fq - b[:k] @ jac_q[:k]
        report.goswf_err_l2.append(math.sqrt(rule.integrate(rg * rg)))
        report.jacobi_err_l2.append(math.sqrt(rule.integrate(rj * rj)))
        report.goswf_err_sup.append(float(np.max(np.abs(fg - a[:k] @ psi_g[:k]))))
        report.jacobi_err_sup.append(float(np.max(np.abs(fg - b[:k] @ jac_g[:k]))))
        report.goswf_err_l2_pythagoras.append(math.sqrt(max(f_norm2 - float(a[:k] @ a[:k]), 0.0)))
        report.goswf_tail_bound.append(math.sqrt(float(np.sum(mu[k:] ** 2))) * g_norm)
    report.goswf_coeffs = a
    report.jacobi_coeffs = b
    report.coeff_bound = np.abs(mu[:n_terms]) * g_norm
    return report
