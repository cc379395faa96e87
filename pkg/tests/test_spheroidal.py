import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from goswf.jacobi import WeightParams, chi_zero, eval_derivative, eval_normalized
from goswf.eigencore import sym_eig
from goswf.laplace_op import OperatorParams, SampledFunction, apply_f, nystrom_matrix, sample
from goswf.quadrature import gauss_jacobi
from goswf.special_fn import PrecisionError
from goswf.spheroidal import (
    build_ode_matrix,
    commutation_offdiag,
    compute_mu,
    eval_psi,
    gram_matrix,
    i_integral,
    mu_derivative,
    ode_residual,
    pswf_eigenvalues,
    q_residual,
    solve_method1,
    solve_method2_nystrom,
)

from conftest import TABLE1, TABLE1_GRID, TABLE2, method1, method2


# differential operator matrix

def test_ode_matrix_zero_bandwidth():
    op = OperatorParams.make(1, 2, 1e-300)
    m = build_ode_matrix(op, 8)
    np.testing.assert_allclose(m, np.diag(chi_zero(op.weight, np.arange(8))), atol=1e-290)


def test_ode_matrix_corner():
    m = build_ode_matrix(OperatorParams.make(0, 0, 1), 20)
    assert m[0, 0] == pytest.approx(-1 / 3, rel=1e-15)


def test_ode_matrix_structure():
    m = build_ode_matrix(OperatorParams.make(3, 3, 2), 12)
    assert np.array_equal(m, m.T)
    assert np.all(np.diag(m, 1) == 0)
    assert np.all(np.triu(m, 3) == 0)
    m = build_ode_matrix(OperatorParams.make(2, 3, 1), 12)
    assert np.all(np.diag(m, 1) != 0)
    with pytest.raises(ValueError):
        build_ode_matrix(OperatorParams.make(0, 0, 1), 3)


# method 1

def test_small_bandwidth_limit():
    basis = solve_method1(OperatorParams.make(1, 2, 1e-6), 8)
    np.testing.assert_allclose(np.abs(basis.coeffs[:, :8]), np.eye(8), atol=1e-4)
    np.testing.assert_allclose(basis.chi, chi_zero(basis.weight, np.arange(8)), atol=1e-4)


def test_parity_symmetric_weight():
    basis = solve_method1(OperatorParams.make(3, 3, 2), 10)
    for n in range(10):
        cross = basis.coeffs[n, (n + 1) % 2 :: 2]
        assert np.max(np.abs(cross)) < 1e-12


def test_no_parity_asymmetric_weight():
    basis = solve_method1(OperatorParams.make(2, 3, 1), 10)
    for n in range(6):
        assert np.max(np.abs(basis.coeffs[n, 0::2])) > 1e-3
        assert np.max(np.abs(basis.coeffs[n, 1::2])) > 1e-3


def test_basis_invariants(table1_params):
    basis = method1(*table1_params)
    np.testing.assert_allclose(np.linalg.norm(basis.coeffs, axis=1), 1.0, rtol=1e-14)
    assert np.all(np.diff(basis.chi) > 0)
    above = ~basis.below_floor
    assert np.all(basis.mu[above] > 0)
    assert np.all(np.diff(basis.mu[above]) < 0)
    assert basis.trunc_order >= basis.n_max + 20


def test_eval_psi_normalization_and_parity():
    basis = method1(3.0, 3.0, 1.0)
    rule = gauss_jacobi(basis.weight, 40)
    x = np.linspace(-1, 1, 41)
    for n in range(9):
        assert rule.integrate(eval_psi(basis, n, rule.nodes) ** 2) == pytest.approx(1.0, abs=1e-10)
        sign = 1 if n % 2 == 0 else -1
        np.testing.assert_allclose(eval_psi(basis, n, -x), sign * eval_psi(basis, n, x), atol=1e-11)
    with pytest.raises(IndexError):
        eval_psi(basis, basis.n_max, 0.0)


def test_sup_bound(table1_params):
    basis = method1(*table1_params)
    grid = np.linspace(-1, 1, 201)
    bound = math.sqrt(basis.weight.total_mass) + 1e-9
    for n in range(basis.n_max):
        assert basis.mu[n] * np.max(np.abs(eval_psi(basis, n, grid))) <= bound


@pytest.mark.parametrize("key, n", [((0.0, 0.0, 1.0), 0), ((3.0, 3.0, 1.0), 2), ((6.0, 7.0, 6.0), 4)])
def test_published_mu(key, n):
    assert method1(*key).mu[n] == pytest.approx(TABLE1[key][n], rel=1e-6)


def test_compute_mu_matches_rayleigh_quotient():
    basis = method1(0.0, 0.0, 1.0)
    op = basis.op
    g = SampledFunction(op.rule, eval_psi(basis, 3, op.rule.nodes))
    fpsi = apply_f(op, g, op.rule.nodes)
    direct = op.rule.integrate(fpsi * g.values)
    assert compute_mu(op, basis.coeffs[3]) == pytest.approx(direct, rel=1e-12)


def test_truncation_tail_check():
    with pytest.raises(PrecisionError):
        solve_method1(OperatorParams.make(0, 0, 30.0, quad_order=200), 5, trunc=8, trunc_cap=16)


def test_determinism():
    op = OperatorParams.make(6, 7, 6)
    a, b = solve_method1(op, 12), solve_method1(op, 12)
    assert np.array_equal(a.coeffs, b.coeffs)
    assert np.array_equal(a.mu, b.mu)


# method 2

def test_nystrom_single_node():
    # OperatorParams refuses one node for any c > 0, so check the 1x1 matrix itself
    rule = gauss_jacobi(WeightParams(1, 2), 1)
    y, w = rule.nodes[0], rule.weights[0]
    b = nystrom_matrix(rule, 0.3)
    assert sym_eig(b).values[0] == pytest.approx(w * math.exp(0.3 * (y * y - 1)), rel=1e-15)
    with pytest.raises(ValueError):
        solve_method2_nystrom(OperatorParams.make(1, 2, 0.3), n_quad=1)


def test_nystrom_published_mu():
    assert method2(5.0, 5.0, 6.0).mu[0] == pytest.approx(0.211037689e-2, rel=1e-8)


def test_cross_method_eigenvalues(table1_params):
    b1, s2 = method1(*table1_params), method2(*table1_params)
    n = b1.n_max
    big = b1.mu >= 1e-10
    np.testing.assert_allclose(s2.mu[:n][big], b1.mu[big], rtol=1e-8)


def test_nystrom_interpolation_reproduces_nodes():
    s2 = method2(3.0, 3.0, 1.0)
    for n in range(4):
        np.testing.assert_allclose(s2.interpolate(n, s2.rule.nodes), s2.node_values(n), atol=1e-10)


# eigenvalue derivative

def test_i_integral_small_bandwidth():
    basis = solve_method1(OperatorParams.make(1, 2, 1e-6), 6)
    rule = gauss_jacobi(basis.weight, 30)
    y = rule.nodes
    for n in range(6):
        ref = rule.integrate(y * eval_normalized(basis.weight, n, y) * eval_derivative(basis.weight, n, y))
        assert i_integral(basis, n) == pytest.approx(ref, rel=1e-4, abs=1e-6)


def test_i_integral_degree_identity():
    # for P_n: int v P_n P_n' w dv equals n exactly
    basis = solve_method1(OperatorParams.make(0, 0, 1e-8), 6)
    for n in range(6):
        assert i_integral(basis, n) == pytest.approx(n, abs=1e-6)
    with pytest.raises(ValueError):
        i_integral(basis, 0, normalization="other")


def fd_mu(alpha, beta, c, n, h=1e-4):
    up = solve_method1(OperatorParams.make(alpha, beta, c + h), n + 2).mu[n]
    down = solve_method1(OperatorParams.make(alpha, beta, c - h), n + 2).mu[n]
    return (up - down) / (2 * h)


@pytest.mark.parametrize("alpha, beta, c, n", [(0, 0, 1, 0), (3, 3, 1, 1)])
def test_derivative_variants(alpha, beta, c, n):
    basis = solve_method1(OperatorParams.make(alpha, beta, c), n + 2)
    first, second = mu_derivative(basis, n)
    fd = fd_mu(alpha, beta, c, n)
    assert first == pytest.approx(fd, rel=1e-5)
    assert abs(second - fd) > 1e-5 * abs(fd)


def test_derivative_chain_rule():
    basis = solve_method1(OperatorParams.make(0, 0, 1), 3)
    d_mu = mu_derivative(basis, 0)[0]
    h = 1e-4
    sq = [solve_method1(OperatorParams.make(0, 0, 1 + s), 3).mu[0] ** 2 for s in (h, -h)]
    assert 2 * basis.mu[0] * d_mu == pytest.approx((sq[0] - sq[1]) / (2 * h), rel=1e-4)


def test_derivative_below_floor():
    basis = method1(0.0, 0.0, 1.0)
    with pytest.raises(PrecisionError):
        mu_derivative(basis, 16)


# prolate special case

@pytest.mark.parametrize("c_tilde, n", [(2.0, 0), (4.0, 0), (6.0, 5)])
def test_pswf_examples(c_tilde, n):
    assert pswf_eigenvalues(c_tilde, n + 1)[n] == pytest.approx(TABLE2[c_tilde][n], rel=1e-9)


def test_pswf_methods_agree():
    lam = pswf_eigenvalues(6.0, 8)
    gram = pswf_eigenvalues(6.0, 8, method="gram")
    np.testing.assert_allclose(gram, lam, rtol=1e-10)
    assert np.all(np.diff(lam) < 0)
    with pytest.raises(ValueError):
        pswf_eigenvalues(6.0, 8, method="qr")


# operator identities

def test_gram_orthonormal(table1_params):
    basis = method1(*table1_params)
    g = gram_matrix(basis)[:11, :11]
    np.testing.assert_allclose(g, np.eye(11), atol=1e-10)


def test_q_eigenrelation(table1_params):
    basis = method1(*table1_params)
    for n in range(9):
        assert q_residual(basis, n) <= 1e-9


def test_ode_residual(table1_params):
    basis = method1(*table1_params)
    x = np.linspace(-0.9, 0.9, 11)
    for n in range(basis.n_max):
        assert np.max(ode_residual(basis, n, x)) <= 1e-6


def test_commutation(table1_params):
    assert commutation_offdiag(method1(*table1_params), method2(*table1_params), 9) <= 1e-8


@pytest.mark.parametrize("alpha, beta, c", [(0, 0, 1), (2, 3, 1), (5, 5, 6)])
def test_completeness_polynomial_sources(alpha, beta, c):
    op = OperatorParams.make(alpha, beta, c)
    basis = solve_method1(op, 20)
    rule = gauss_jacobi(op.weight, 60)
    rng = np.random.default_rng(int(10 * c + alpha))
    g = sample(op.rule, Polynomial(rng.normal(size=7)))
    f = apply_f(op, g, rule.nodes)
    psi = basis.values(rule.nodes)
    coeffs = psi @ (rule.weights * f)
    resid = f - coeffs @ psi
    assert math.sqrt(rule.integrate(resid**2)) <= 1e-8
