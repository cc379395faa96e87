"""GOSWFs and their eigenvalues, by two independent routes.

Method 1 diagonalizes the commuting second-order differential operator

    -[(1-x^2) d^2 + (b - a - (a+b+2) x) d + c^2 x^2 + c (b - a) x]

in the orthonormal Jacobi basis (a symmetric pentadiagonal matrix). Its
eigenvectors are the Jacobi coefficients of psi_n and its eigenvalues are
chi_n(c). The integral-operator eigenvalue mu_n is then a Rayleigh quotient.

Method 2 is the Nystrom discretization of F_c on Gauss-Jacobi nodes, with
off-node values from the interpolation formula
psi_n(x) = (1/mu_n) sum_j w_j exp(c (x y_j - 1)) psi_n(y_j).

All functions are normalized to unit L2(w) norm.
"""

from dataclasses import dataclass
import math

import numpy as np

from .eigencore import sym_eig, sym_eig_banded, to_lower_bands
from .jacobi import (
    WeightParams,
    chi_zero,
    eval_normalized_all,
    eval_series,
    x_matrix,
    x_squared_matrix,
)
from .laplace_op import OperatorParams, SampledFunction, apply_q, fourier_matrix, nystrom_matrix
from .quadrature import gauss_jacobi
from .special_fn import PrecisionError

__all__ = [
    "PRECISION_FLOOR",
    "GoswfBasis",
    "NystromSystem",
    "build_ode_matrix",
    "solve_method1",
    "eval_psi",
    "compute_mu",
    "solve_method2_nystrom",
    "i_integral",
    "mu_derivative",
    "pswf_eigenvalues",
    "gram_matrix",
    "q_residual",
    "ode_residual",
    "commutation_offdiag",
]

PRECISION_FLOOR = 1e-14
TAIL_TOL = 1e-12
TAIL_LEN = 5
TRUNC_CAP = 1024
CHI_TIE_TOL = 1e-10
DENSE_LIMIT = 256


def default_trunc(n_max, c):
    return n_max + max(20, math.ceil(2 * c))


def build_ode_matrix(op, trunc):
    """Matrix of the commuting differential operator on P_0 .. P_{trunc-1}.

    Its eigenvalues are +chi_n(c); with c = 0 it is diag(k (k + a + b + 1)).
    """
    if trunc < 4:
        raise ValueError(f"truncation order must be >= 4, got {trunc}")
    w, c = op.weight, op.c
    k = np.arange(trunc)
    m = np.diag(chi_zero(w, k).astype(float))
    m -= c * c * x_squared_matrix(w, trunc)
    if w.alpha != w.beta:
        m -= c * (w.beta - w.alpha) * x_matrix(w, trunc)
    return m


@dataclass(frozen=True, eq=False)
class GoswfBasis:
    """First ``n_max`` GOSWFs as Jacobi series.

    ``coeffs[n, k]`` is the coefficient of P_k in psi_n. ``chi`` holds the
    differential-operator eigenvalues (ascending) and ``mu`` the matching
    integral-operator eigenvalues.
    """

    op: OperatorParams
    trunc_order: int
    coeffs: np.ndarray
    chi: np.ndarray
    mu: np.ndarray
    below_floor: np.ndarray
    precision_floor: float = PRECISION_FLOOR

    @property
    def n_max(self):
        return self.coeffs.shape[0]

    @property
    def weight(self):
        return self.op.weight

    def psi(self, n, x, order=0):
        return eval_psi(self, n, x, order)

    def values(self, x, order=0):
        """All basis functions at ``x``; shape ``(n_max,) + x.shape``."""
        return np.stack([eval_psi(self, n, x, order) for n in range(self.n_max)])


def compute_mu(op, coeffs):
    """mu_n as the double-quadrature Rayleigh quotient of F_c at psi_n."""
    rule = op.rule
    coeffs = np.asarray(coeffs, dtype=float)
    phi = eval_normalized_all(op.weight, len(coeffs) - 1, rule.nodes)
    u = np.sqrt(rule.weights) * (coeffs @ phi)
    return float(u @ nystrom_matrix(rule, op.c) @ u / (u @ u))


def solve_method1(op, n_max, trunc=None, precision_floor=PRECISION_FLOOR, trunc_cap=TRUNC_CAP):
    """GOSWFs from the eigenvectors of the differential-operator matrix.

    The truncation is doubled until the last few Jacobi coefficients of every
    retained eigenvector drop below 1e-12.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    trunc = max(default_trunc(n_max, op.c) if trunc is None else int(trunc), n_max + TAIL_LEN, 4)
    while True:
        m = build_ode_matrix(op, trunc)
        if trunc > DENSE_LIMIT:
            dec = sym_eig_banded(to_lower_bands(m, 2))
        else:
            dec = sym_eig(m)
        vecs = dec.vectors[:, :n_max]
        tails = np.max(np.abs(vecs[-TAIL_LEN:, :]), axis=0)
        if np.all(tails < TAIL_TOL):
            break
        if trunc * 2 > trunc_cap:
            bad = int(np.argmax(tails >= TAIL_TOL))
            raise PrecisionError(
                f"Jacobi coefficients of psi_{bad} do not decay within trunc={trunc}",
                residual=float(tails[bad]),
            )
        trunc *= 2

    chi = dec.values[: n_max + 1]
    gaps = np.diff(chi)
    if np.any(gaps < CHI_TIE_TOL):
        i = int(np.argmin(gaps))
        raise PrecisionError(f"chi_{i} and chi_{i + 1} are numerically tied", residual=float(gaps[i]))

    coeffs = np.ascontiguousarray(vecs.T)
    mu = np.array([compute_mu(op, row) for row in coeffs])
    for arr in (coeffs, mu):
        arr.flags.writeable = False
    chi = dec.values[:n_max].copy()
    chi.flags.writeable = False
    return GoswfBasis(
        op=op,
        trunc_order=trunc,
        coeffs=coeffs,
        chi=chi,
        mu=mu,
        below_floor=np.abs(mu) < precision_floor,
        precision_floor=precision_floor,
    )


def eval_psi(basis, n, x, order=0):
    """psi_n(x) (or its ``order``-th derivative) by Clenshaw summation."""
    if not 0 <= n < basis.n_max:
        raise IndexError(f"psi index {n} outside 0..{basis.n_max - 1}")
    return eval_series(basis.weight, basis.coeffs[n], x, order)


@dataclass(frozen=True, eq=False)
class NystromSystem:
    """Nystrom discretization of F_c; eigenvalues sorted descending."""

    op: OperatorParams
    matrix: np.ndarray
    mu: np.ndarray
    vectors: np.ndarray
    below_floor: np.ndarray

    @property
    def rule(self):
        return self.op.rule

    def node_values(self, n):
        return self.vectors[:, n] / np.sqrt(self.rule.weights)

    def interpolate(self, n, x):
        """psi_n off the nodes: (1/mu_n) sum_j w_j exp(c (x y_j - 1)) psi_n(y_j)."""
        rule = self.rule
        x = np.asarray(x, dtype=float)
        kern = np.exp(self.op.c * (np.multiply.outer(x, rule.nodes) - 1.0))
        return kern @ (rule.weights * self.node_values(n)) / self.mu[n]


def solve_method2_nystrom(op, n_quad=None, precision_floor=PRECISION_FLOOR):
    if n_quad is not None and n_quad != op.quad_order:
        op = op.with_quad_order(n_quad)
    b = nystrom_matrix(op.rule, op.c)
    dec = sym_eig(b).descending()
    mu = dec.values.copy()
    scale = np.linalg.norm(b, 2)
    if mu[-1] < -precision_floor * scale:
        raise PrecisionError(
            "Nystrom matrix is not positive semidefinite", residual=float(mu[-1] / scale)
        )
    mu.flags.writeable = False
    return NystromSystem(
        op=op,
        matrix=b,
        mu=mu,
        vectors=dec.vectors,
        below_floor=mu < precision_floor,
    )


def i_integral(basis, n, normalization="unit"):
    """I_n(c) = int v psi_n(v) psi_n'(v) w(v) dv.

    ``normalization="mu_scaled"`` rescales psi_n to have norm mu_n, which multiplies
    I_n by mu_n^2.
    """
    k = basis.trunc_order
    rule = gauss_jacobi(basis.weight, k + 1)
    y = rule.nodes
    val = rule.integrate(y * eval_psi(basis, n, y) * eval_psi(basis, n, y, order=1))
    if normalization == "unit":
        return float(val)
    if normalization == "mu_scaled":
        return float(basis.mu[n] ** 2 * val)
    raise ValueError(f"unknown normalization {normalization!r}")


def mu_derivative(basis, n):
    """Both closed-form candidates for d mu_n / dc.

    Returns ``((I/c - mu^2)/mu, (I/c - 1)/mu)`` with I_n taken in the
    normalization ||psi_n|| = mu_n that goes with those formulas.
    """
    mu = basis.mu[n]
    if basis.below_floor[n]:
        raise PrecisionError(f"mu_{n} = {mu:.3e} is below the precision floor")
    c = basis.op.c
    i_n = i_integral(basis, n, normalization="mu_scaled")
    return (i_n / c - mu * mu) / mu, (i_n / c - 1.0) / mu


def pswf_eigenvalues(c_tilde, n_max, n_quad=None, method="hartley"):
    """Eigenvalues (c~/2pi) |mu~_n|^2 of the finite Fourier operator, descending.

    ``method="hartley"`` diagonalizes the real symmetric matrix Re B + Im B of
    the Fourier matrix B. Its eigenvectors are the (real) PSWF samples and its
    eigenvalues are +-|mu~_n|, so small eigenvalues keep full absolute accuracy.
    ``method="gram"`` uses the Hermitian matrix B B^H; squaring limits it to
    values above roughly 1e-15 and it is kept as a cross-check.
    """
    if n_quad is None:
        n_quad = max(math.ceil(2 * math.e * c_tilde) + 1, 40)
    b = fourier_matrix(c_tilde, n_quad)
    if method == "hartley":
        vals = sym_eig(b.real + b.imag).values ** 2
    elif method == "gram":
        from .eigencore import herm_eig

        g = b @ b.conj().T
        g = np.triu(g) + np.triu(g, 1).conj().T
        g[np.diag_indices_from(g)] = g.diagonal().real
        vals = herm_eig(g).values
    else:
        raise ValueError(f"unknown method {method!r}")
    lam = np.sort(c_tilde / (2 * math.pi) * vals)[::-1]
    return lam[:n_max]


def gram_matrix(basis, rule=None):
    """L2(w) inner products of the basis functions."""
    if rule is None:
        rule = gauss_jacobi(basis.weight, basis.trunc_order + 1)
    v = basis.values(rule.nodes)
    return (v * rule.weights) @ v.T


def q_residual(basis, n, rule=None):
    """|| Q psi_n - mu_n^2 psi_n ||_{L2(w)}."""
    op = basis.op
    g = SampledFunction(op.rule, eval_psi(basis, n, op.rule.nodes))
    if rule is None:
        rule = gauss_jacobi(basis.weight, 60)
    diff = apply_q(op, g, rule.nodes) - basis.mu[n] ** 2 * eval_psi(basis, n, rule.nodes)
    return math.sqrt(rule.integrate(diff**2))


def ode_residual(basis, n, x):
    """Relative residual of the differential equation for psi_n at points ``x``.

    Scaled by ``max(|chi_n|, 1) * max|psi_n|`` over ``x``.
    """
    w, c = basis.weight, basis.op.c
    a, b = w.alpha, w.beta
    x = np.asarray(x, dtype=float)
    p0 = eval_psi(basis, n, x)
    p1 = eval_psi(basis, n, x, order=1)
    p2 = eval_psi(basis, n, x, order=2)
    chi = basis.chi[n]
    res = (1 - x * x) * p2 + (b - a - (a + b + 2) * x) * p1 + (c * c * x * x + c * x * (b - a) + chi) * p0
    return np.abs(res) / (max(abs(chi), 1.0) * np.max(np.abs(p0)))


def commutation_offdiag(basis, system, n_count):
    """max |v_n^T B v_m|, m != n, for Method-1 vectors sampled on the Nystrom nodes."""
    rule = system.rule
    v = np.stack([np.sqrt(rule.weights) * eval_psi(basis, n, rule.nodes) for n in range(n_count)])
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    m = v @ system.matrix @ v.T
    return float(np.max(np.abs(m - np.diag(np.diag(m)))))
