import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from oracles import alpha_m1, skew_density_m1, weight_m1 as weight_oracle
from truncorth.correlation import EnsembleSpec, a_entry, expected_reals_exact, generating_function
from truncorth.density import (
    AccuracyError,
    density_complex_m1_closed,
    density_real,
    density_real_m1_closed,
    expected_reals_numeric,
    full_moment,
    generating_function_numeric,
    kernel_S,
    quadrature_alpha,
    real_weight,
    weight_m1,
    weight_product,
)
from truncorth.asymptotics import edge_density, edge_tail, log_law
from truncorth.exact import to_float


def test_weight_m1_examples():
    assert weight_m1(0.3, 2) == pytest.approx(2 ** -0.5, rel=1e-15)
    assert weight_m1(-0.9, 2) == pytest.approx(2 ** -0.5, rel=1e-15)
    assert weight_m1(0.0, 4) == pytest.approx(math.sqrt(1.5), rel=1e-15)
    assert weight_m1(0.999999, 1) > 100 * weight_m1(0.0, 1)
    with pytest.raises(ValueError):
        weight_m1(1.0, 3)


@given(st.floats(-0.99, 0.99), st.integers(1, 9))
def test_weight_m1_oracle(x, L):
    assert weight_m1(x, L) == pytest.approx(weight_oracle(x, L), rel=1e-13)


def test_weight_product_m1_is_weight_m1():
    x = np.linspace(-0.95, 0.95, 17)
    assert np.allclose(weight_product(x, EnsembleSpec(2, (5,))), weight_m1(x, 5), rtol=1e-14, atol=0)


def _convolution_oracle(lam, L1, L2):
    a = abs(lam)
    f = lambda t: weight_oracle(a / t, L1) * weight_oracle(t, L2) / t
    return 2 * integrate.quad(f, a, 1, epsabs=1e-14, epsrel=1e-13, limit=200)[0]


@pytest.mark.parametrize("Ls", [(2, 2), (4, 4), (2, 5), (3, 4)])
@pytest.mark.parametrize("lam", [0.05, 0.3, -0.6, 0.95])
def test_weight_product_convolution(Ls, lam):
    want = _convolution_oracle(lam, *Ls)
    assert weight_product(lam, EnsembleSpec(2, Ls)) == pytest.approx(want, rel=1e-9)


def test_weight_product_near_corner():
    for lam in (0.99, 0.9999):
        v = weight_product(lam, EnsembleSpec(2, (2, 2)))
        assert np.isfinite(v) and v > 0
        assert v == pytest.approx(_convolution_oracle(lam, 2, 2), rel=1e-8)


def test_weight_product_extends_range():
    v = weight_product(1e-40, EnsembleSpec(2, (2, 2)))
    assert np.isfinite(v) and v > weight_product(1e-10, EnsembleSpec(2, (2, 2)))


@pytest.mark.parametrize("Ls", [(2, 2), (4, 4), (1, 2), (1, 1), (3, 5), (4, 4, 4)])
def test_weight_moments_multiply(Ls):
    W = real_weight(Ls)
    for n in (0, 2, 4):
        got = 2 * integrate.quad(lambda u: W.u_measure(np.array([u]))[0] * math.exp(-n * u * u), 0, W.umax, limit=400)[0]
        assert got == pytest.approx(full_moment(n, Ls), rel=1e-9)


def test_quadrature_alpha_examples():
    assert quadrature_alpha(1, 2, EnsembleSpec(2, (2,))) == pytest.approx(2 / 3, abs=1e-10)
    assert quadrature_alpha(3, 3, EnsembleSpec(4, (4,))) == 0.0
    assert quadrature_alpha(1, 2, EnsembleSpec(2, (4,))) == pytest.approx(24 / 35, rel=1e-8)


@pytest.mark.parametrize("Ls", [(1,), (3,), (5,)])
def test_quadrature_alpha_odd_L_oracle(Ls):
    for a, b in [(0, 1), (2, 1), (0, 3), (2, 3)]:
        got = quadrature_alpha(a + 1, b + 1, EnsembleSpec(4, Ls))
        assert got == pytest.approx(alpha_m1(a, b, Ls[0]), rel=1e-9)


def test_quadrature_alpha_antisymmetric():
    spec = EnsembleSpec(4, (4, 2))
    for j, k in [(1, 2), (2, 3), (1, 4)]:
        assert quadrature_alpha(j, k, spec) == pytest.approx(-quadrature_alpha(k, j, spec), rel=1e-10)


def test_quadrature_alpha_two_factors_exact():
    for Ls in [(2, 4), (4, 4)]:
        spec = EnsembleSpec(4, Ls)
        for J in (1, 2):
            for K in (1, 2):
                want = to_float(a_entry(J, K, spec))
                assert quadrature_alpha(2 * J - 1, 2 * K, spec) == pytest.approx(want, rel=1e-8)


def test_catalan_value():
    catalan = 0.915965594177219015
    got = quadrature_alpha(1, 2, EnsembleSpec(2, (1, 2)))
    assert got == pytest.approx((2 * catalan + 5) / (3 * math.pi), rel=1e-10)
    assert generating_function_numeric(EnsembleSpec(2, (1, 2)))[2] == pytest.approx(got, rel=1e-12)


def test_accuracy_error_carries_bound():
    with pytest.raises(AccuracyError) as info:
        quadrature_alpha(1, 4, EnsembleSpec(4, (4,)), tol=1e-30)
    assert info.value.achieved > 0


def test_generating_function_numeric_matches_exact():
    for spec in [EnsembleSpec(4, (4, 4)), EnsembleSpec(3, (4, 4, 4)), EnsembleSpec(5, (3,))]:
        exact = generating_function(spec).coefficients
        num = generating_function_numeric(spec)
        for k, v in exact.items():
            assert num[k] == pytest.approx(to_float(v), abs=1e-9)


def test_kernel_examples():
    for N in (2, 3, 5):
        assert kernel_S(0.0, 0.0, EnsembleSpec(N, (2,))) == pytest.approx(0.5, rel=1e-12)
    assert expected_reals_numeric(EnsembleSpec(2, (4,))) == pytest.approx(48 / 35, abs=1e-6)


@pytest.mark.parametrize("N,L", [(2, 1), (2, 4), (4, 3), (4, 4), (6, 5)])
def test_density_matches_skew_polynomial_oracle(N, L):
    spec = EnsembleSpec(N, (L,))
    for x in (-0.83, -0.2, 0.0, 0.45, 0.97):
        assert density_real(x, spec) == pytest.approx(skew_density_m1(x, N, L), rel=1e-10)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
@pytest.mark.parametrize("L", [1, 2, 4, 5])
def test_kernel_matches_closed_density(N, L):
    x = np.linspace(-0.98, 0.98, 51)
    spec = EnsembleSpec(N, (L,))
    assert np.max(np.abs(density_real(x, spec) - density_real_m1_closed(x, N, L))) < 1e-10


def test_kernel_off_diagonal_shapes():
    spec = EnsembleSpec(4, (4,))
    grid = kernel_S(np.array([[0.1], [0.5]]), np.array([[0.2, -0.3]]), spec)
    assert grid.shape == (2, 2)
    with pytest.raises(ValueError):
        kernel_S(1.0, 0.0, spec)


@pytest.mark.parametrize("spec", [EnsembleSpec(N, Ls) for N in (2, 3, 5) for Ls in [(2, 4), (4, 4), (2, 2, 2)]])
def test_density_closure_product(spec):
    assert expected_reals_numeric(spec) == pytest.approx(to_float(expected_reals_exact(spec)), abs=1e-8)


def test_density_product_positive_and_even():
    spec = EnsembleSpec(4, (4, 4))
    x = np.linspace(0.01, 0.99, 15)
    d = density_real(x, spec)
    assert np.all(d > 0)
    assert np.allclose(d, density_real(-x, spec), rtol=1e-12)


def test_closed_density_examples():
    for N, L in [(2, 2), (3, 4), (5, 3)]:
        assert density_real_m1_closed(0.0, N, L) == pytest.approx(1 / special.beta(L / 2, 0.5), rel=1e-14)
    total = integrate.quad(lambda x: density_real_m1_closed(x, 2, 2), -1, 1)[0]
    assert total == pytest.approx(4 / 3, abs=1e-8)
    with pytest.raises(ValueError):
        density_real_m1_closed(1.0, 2, 2)


def test_complex_density_examples():
    assert density_complex_m1_closed(0.5j, 2, 1) == pytest.approx(4 / (5 * math.pi), rel=1e-14)
    with pytest.raises(ValueError):
        density_complex_m1_closed(1.2j, 2, 2)
    with pytest.raises(ValueError):
        density_complex_m1_closed(0.3 - 0.1j, 2, 2)
    z = 0.9 * np.exp(0.7j)
    assert density_complex_m1_closed(z, 10, 20) < density_complex_m1_closed(z, 10, 2)


@pytest.mark.parametrize("N,L", [(2, 2), (3, 4), (2, 1)])
def test_total_eigenvalue_count(N, L):
    def radial(r):
        f = lambda t: density_complex_m1_closed(r * np.exp(1j * t), N, L) * r
        return integrate.quad(f, 0, math.pi, epsabs=1e-11, limit=200)[0]

    cplx = integrate.quad(radial, 0, 1, epsabs=1e-9, limit=200)[0]
    real = integrate.quad(lambda x: density_real_m1_closed(x, N, L), -1, 1, limit=200)[0]
    assert 2 * cplx + real == pytest.approx(N, abs=1e-4)


# -- edge regime, fixed L -----------------------------------------------------------------


@pytest.mark.parametrize("L", [1, 2, 4])
def test_edge_law_is_limit_of_finite_N(L):
    x = np.array([0.5, 2.0, 8.0])
    errs = []
    for N in (500, 5000):
        finite = density_real_m1_closed(1 - x / N, N, L) / N
        errs.append(np.max(np.abs(finite / edge_density(x, L) - 1)))
    assert errs[1] < errs[0]
    assert errs[1] < 2e-3


def test_edge_tail_is_half_inverse_beta():
    L = 4
    B = special.beta(L / 2, 0.5)
    assert 50 * edge_density(50.0, L) == pytest.approx(1 / (2 * B), rel=0.02)
    assert edge_tail(50.0, L) * 50 == pytest.approx(1 / (2 * B), rel=1e-14)
    # consistent with E ~ log N / B: the edge carries half of it from each side
    N = 10 ** 6
    E = integrate.quad(lambda x: density_real_m1_closed(x, N, L), -1, 1, points=[-1 + 1e-3, 1 - 1e-3], limit=400)[0]
    assert E / log_law(N, L) == pytest.approx(1, rel=0.1)


@pytest.mark.xfail(strict=True, reason="the edge tail is 1/(2B x), half the stated 1/(B x)")
def test_edge_tail_stated_constant():
    L = 4
    assert 50 * edge_density(50.0, L) == pytest.approx(1 / special.beta(L / 2, 0.5), rel=0.02)


def test_edge_convergence_small_N():
    L = 4
    x = np.array([0.5, 1.0, 2.0])
    limit = edge_density(x, L)
    vals = [density_real_m1_closed(1 - x / N, N, L) / N for N in (50, 100, 200)]
    d1 = np.abs(vals[1] - vals[0])
    d2 = np.abs(vals[2] - vals[1])
    assert np.all(d2 < d1)
    assert np.all(np.abs(vals[2] / limit - 1) < 0.05)


def test_kernel_large_N_log_space():
    x = np.array([0.0, 0.3, -0.7, 0.95])
    for N in (100, 201):
        got = density_real(x, EnsembleSpec(N, (50,)))
        assert np.allclose(got, density_real_m1_closed(x, N, 50), rtol=1e-9)


def test_product_density_diverges_at_origin():
    assert density_real(0.0, EnsembleSpec(3, (4, 4))) == math.inf
