import cmath
import math
from fractions import Fraction as F

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from cmkernel.arith import INF, hilbert, kronecker, valuation
from cmkernel.kernel import (KernelParams, diff_set, eisenstein_local, enumerate_pairs, kernel_global,
                             kernel_local, kernel_local_deriv, kernel_local_deriv_numeric,
                             kernel_local_half, local_sign_ok, pair_places, projection_coeff_finite,
                             theta_global, theta_local)
from cmkernel.special import G2, M_sigma, V_closed, V_quad, e_inf, q0

P7 = KernelParams(7, 3)
P71 = KernelParams(7, 1)
P23 = KernelParams(23, 5, ks=[1])


def test_special_functions():
    assert e_inf(1) == pytest.approx(2 * math.exp(-2 * math.pi))
    assert e_inf(-1) == 0 and e_inf(0) == 0
    for t in (0.1, 1.0, 3.0, 10.0):
        assert 0 < q0(t) <= math.exp(-t) / t
    assert M_sigma(0.3, 0.5) == 0 and M_sigma(0.3, 0) == 0
    assert G2(1) == pytest.approx(1 / math.pi)


@pytest.mark.parametrize("s,t", [(0.7, 2), (0.7, -2), (0.5, 1), (0.3, -0.5), (1.2, 0.8)])
def test_V_bessel_matches_quadrature(s, t):
    assert abs(complex(V_closed(s, F(t))) - complex(V_quad(s, F(t)))) < 1e-10


def test_eisenstein_geometric_sum_vanishes_at_5():
    assert kronecker(-7, 5) == -1
    # sum_{j=0}^{1} 5^{-j(1-2s)} omega(5)^j at s = 1/2 is 1 - 1
    assert eisenstein_local(5, F(5), 0.5, P7) == 0
    assert eisenstein_local(5, F(10, 3), 0.5, P7) == 0


def test_eisenstein_below_r_vanishes():
    assert eisenstein_local(3, F(1), 0.7, P7) == 0
    assert eisenstein_local(3, F(2, 3), 0.3, P7) == 0
    assert eisenstein_local(3, F(3), 0.7, P7) != 0


@pytest.mark.parametrize("a", [2, -2, F(1, 3), F(-5, 2)])
@pytest.mark.parametrize("s", [0.7, 0.5])
def test_eisenstein_inf_quadrature(a, s):
    a = F(a)
    with mp.workdps(20):
        sgn = 1 if a > 0 else -1
        ref = sgn * abs(float(a)) ** (1 - s) * mp.gamma(s + 0.5) * mp.pi ** (-s - 0.5) * V_quad(s, -a)
    assert abs(eisenstein_local(INF, a, s, P7) - complex(ref)) < 1e-10


@pytest.mark.parametrize("a", [1, 2, F(1, 2), F(7, 3)])
def test_eisenstein_inf_half(a):
    # at s = 1/2 the value is supported on a < 0; the sign is the one forced by the V_s integral
    assert eisenstein_local(INF, F(a), 0.5, P7) == 0
    val = eisenstein_local(INF, -F(a), 0.5, P7)
    assert abs(val - 1j * math.sqrt(float(a)) * e_inf(a)) < 1e-12


def test_theta_inert_even():
    # p = 5 inert in Q(sqrt -7), trivial chi: |a|_5^{1/2} chi(5)
    assert theta_local(5, F(25), P7) == pytest.approx(0.2)


@pytest.mark.parametrize("a", [5, 125, F(2, 5)])
def test_theta_inert_odd_vanishes(a):
    assert theta_local(5, F(a), P7) == 0


def test_theta_split_divisor_count():
    assert KernelParams(7, 3).K.split_type(2) == "split"
    assert theta_local(2, F(8), P7) == pytest.approx(8 ** -0.5 * 4)


def test_theta_split_cubic():
    w = cmath.exp(2j * math.pi / 3)
    val = theta_local(2, F(4), P23)
    # |4|_2^{1/2} (a^2 + a b + b^2) with a b = 1, a = w or w^2
    assert abs(val - 0.5 * (w * w + 1 + w.conjugate() ** 2)) < 1e-12


def test_epsilon_local_and_global():
    for s in (0.3, 0.5, 0.7):
        assert P7.epsilon_local(INF, s) == -1
        assert P7.epsilon_local(5, s) == 1
        assert P7.epsilon_local(11, s) == 1
    assert P7.epsilon_global(0.5) == pytest.approx(-kronecker(-7, 3))
    assert P23.epsilon_global(0.5) == pytest.approx(-kronecker(-23, 5))


def _parity(P):
    return 1 if P.sign() == -1 else 0


def test_diff_set_parity_half():
    # global sign -omega(r): omega(3) = -1 gives sign +1 and even parity, r = 1 gives odd
    assert kronecker(-7, 3) == -1
    assert P7.sign() == 1 and P71.sign() == -1
    assert len(diff_set(F(1, 2), F(1, 2), P7)) % 2 == 0
    assert len(diff_set(F(1, 2), F(1, 2), P71)) % 2 == 1


def test_diff_set_small_pairs_d7():
    found = 0
    for num in range(1, 12):
        for den in range(1, 12):
            eta = F(num, den)
            if eta == 1:
                continue
            xi = 1 - eta
            d = diff_set(eta, xi, P71)
            assert len(d) % 2 == 1
            if eta * xi > 0:
                # omega_inf(-eta xi) = -1 = eps_inf, so Diff is a nonempty set of finite places
                assert INF not in d
                assert len(d) >= 1
                found += 1
    assert found > 10


def test_diff_set_independent_of_a():
    for eta in (F(1, 3), F(3), F(-2, 5)):
        xi = 1 - eta
        base = diff_set(eta, xi, P7)
        assert diff_set(eta, xi, KernelParams(7, 3)) == base


def test_kernel_half_vanishes_off_sign():
    for v in (INF, 3, 5, 7, 2):
        for eta in (F(1, 3), F(3), F(-2, 5), F(5, 4)):
            xi = 1 - eta
            if local_sign_ok(v, eta, xi, P7):
                continue
            assert kernel_local_half(v, F(6), eta, xi, P7) == 0
            assert abs(kernel_local(v, F(6), eta, xi, 0.5, P7)) < 1e-12


def test_kernel_split_divisor_counts():
    # p = 2 split, trivial chi: |a||eta xi|^{1/2} (ord(xi a r^-1) + 1)(ord(eta a) + 1)
    eta, xi = F(4), F(-3)
    a = F(2)
    val = kernel_local_half(2, a, eta, xi, P7)
    assert val == pytest.approx(0.5 * 0.5 * (1 + 1) * (3 + 1))
    assert abs(kernel_local(2, a, eta, xi, 0.5, P7) - val) < 1e-12


def test_kernel_inf_half():
    eta, xi, a = F(1, 3), F(2, 3), F(-1)
    ref = 2j * math.sqrt(2 / 9) * 1 * e_inf(1)
    assert abs(kernel_local_half(INF, a, eta, xi, P7) - ref) < 1e-15
    assert abs(kernel_local(INF, a, eta, xi, 0.5, P7) - ref) < 1e-12


def test_deriv_inert_odd_vanishes():
    P = P71
    # w = 5 inert, ord_5(eta a) odd
    eta = F(5, 6)
    xi = 1 - eta
    assert 5 in diff_set(eta, xi, P, extra=[5])
    assert valuation(eta * 1, 5) % 2 == 1
    assert kernel_local_deriv(5, F(1), eta, xi, P) == 0


def test_deriv_archimedean_closed_form():
    P = P71
    a, eta, xi = F(1), F(-1, 3), F(4, 3)
    assert eta * a < 0 < xi * a
    af = 1.0
    ref = -4j * math.sqrt(4 / 9) * af * math.exp(2 * math.pi * af) * q0(4 * math.pi * af * 4 / 3)
    got = kernel_local_deriv(INF, a, eta, xi, P)
    assert abs(got - ref) < 1e-12 * abs(ref)
    num = kernel_local_deriv_numeric(INF, a, eta, xi, P)
    assert abs(got - num) < 1e-6 * abs(got)


@pytest.mark.parametrize("w,a,eta", [(5, F(1), F(1, 6)), (5, F(25), F(1, 6)), (3, F(1), F(1, 4)),
                                     (5, F(5), F(1, 6)), (7, F(1), F(1, 8))])
def test_deriv_finite_matches_numeric(w, a, eta):
    P = P71 if w != 7 else P7
    xi = 1 - eta
    assert w in diff_set(eta, xi, P, extra=[w])
    got = kernel_local_deriv(w, a, eta, xi, P)
    num = kernel_local_deriv_numeric(w, a, eta, xi, P)
    assert abs(got - num) <= 1e-6 * max(1.0, abs(got))


def test_enumerate_pairs_a1_empty():
    assert enumerate_pairs(F(1), P7, "half") == []


@pytest.mark.parametrize("a", [6, 12, 20, 28])
def test_enumerate_pairs_filter(a):
    pairs = enumerate_pairs(F(a), P7, "half")
    for eta, xi in pairs:
        assert eta + xi == 1
        for v in pair_places(F(a), eta, xi, P7):
            assert kernel_local_half(v, F(a), eta, xi, P7) != 0


def test_excluded_eta_has_zero_product():
    a = F(12)
    kept = set(enumerate_pairs(a, P7, "half"))
    for num in range(-30, 31):
        eta = F(num, 4)
        if eta in (0, 1) or (eta, 1 - eta) in kept:
            continue
        xi = 1 - eta
        prod = 1
        for v in pair_places(a, eta, xi, P7):
            prod *= kernel_local_half(v, a, eta, xi, P7)
        assert prod == 0


def test_cubic_degenerate_terms():
    # A_1 vanishes off norm type; A_0 = L(1, omega) (1 - omega(5)) theta = (2 h / (w sqrt D)) * 2 * theta
    # with h = 3, w = 2, omega(5) = -1 for D = 23
    assert kronecker(-23, 5) == -1
    nz = 0
    for a in (-1, -2, -3, -6):
        r = kernel_global(F(a), P23)
        th = theta_global(F(a), P23)
        assert r["A1"] == 0
        assert abs(r["A0"] - 6 / math.sqrt(23) * th) < 1e-12 * abs(th)
        nz += abs(r["A0"]) > 0
    assert nz == 4


def test_kernel_global_d7_a2_geometric():
    from cmkernel.quaternion import generating_series_terms
    r = generating_series_terms(P7, 2)
    assert abs(r["lhs"] - r["rhs"]) < 1e-10 * abs(r["rhs"])
    assert r["route_err"] < 1e-12


def test_negative_a_wrong_branch():
    # e_inf(-a) vanishes for a > 0, so the half-kernel at infinity is zero
    assert kernel_local_half(INF, F(2), F(1, 3), F(2, 3), P7) == 0


def test_projection_empty_sum():
    # a = 1 has no pair with Diff = {5} on D = 7, m = 1
    r = projection_coeff_finite(5, F(1), P71)
    assert r["terms"] == [] or all(abs(t) == 0 for t in r["terms"])
    assert r["value"] == 0


fe_s = st.sampled_from([0.3, 0.7, 0.5 + 0.2j, 0.9, 0.1 - 0.3j])


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([INF, 2, 3, 5, 7, 11]), st.integers(-3, 3), st.integers(1, 9), st.integers(-20, 20),
       st.integers(1, 9), fe_s)
def test_local_functional_equation(v, k, u, num, den, s):
    P = P7
    base = 3 if v == INF else v
    a = F(base) ** k * u
    eta = F(num, den)
    if eta in (0, 1):
        return
    xi = 1 - eta
    lhs = kernel_local(v, a, eta, xi, s, P)
    rhs = P.omega_v(-eta * xi, v) * P.epsilon_local(v, s) * kernel_local(v, a, eta, xi, 1 - s, P)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


@settings(max_examples=100, deadline=None)
@given(st.integers(-40, 40), st.integers(1, 12))
def test_diff_set_parity_property(num, den):
    eta = F(num, den)
    if eta in (0, 1):
        return
    xi = 1 - eta
    for P in (P7, P71, P23, KernelParams(23, 1, ks=[1])):
        d = diff_set(eta, xi, P)
        assert len(d) % 2 == _parity(P)
        # each place in Diff has omega_v(-eta xi) != eps_v
        for v in d:
            assert hilbert(-eta * xi, -P.D, v) != round(P.epsilon_local(v, 0.5).real)
