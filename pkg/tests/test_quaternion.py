from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st
from sympy import primerange

from cmkernel.arith import INF, hilbert, kronecker, valuation
from cmkernel.kernel import KernelParams
from cmkernel.quaternion import (M_k, build_algebra, count_gamma, count_gamma_naive, cycle_trace_check,
                                 degenerate_linking, derivative_term_match, enumerate_gamma,
                                 generating_series_terms, height_pairing, ijk_mul, linking_number,
                                 m_a, m_bad, measure_constants, pairing_direct, pairing_orbital,
                                 tau_product)

P7 = KernelParams(7, 3)
S7 = build_algebra(P7)
P23 = KernelParams(23, 5, ks=[1])
S23 = build_algebra(P23)


def test_ramification_d7_m3():
    assert kronecker(-7, 3) == -1
    assert S7.ramification() == frozenset({3, INF})
    for v in [INF] + list(primerange(2, 60)):
        assert (hilbert(-7, -S7.e0, v) == -1) == (v in (3, INF))


def test_override_ramification():
    S = build_algebra(KernelParams(7, 1), ramification_override={5, INF})
    assert S.ramification() == frozenset({5, INF})
    for v in [INF] + list(primerange(2, 60)):
        assert (hilbert(-7, -S.e0, v) == -1) == (v in (5, INF))


def test_split_everywhere_rejected():
    with pytest.raises(ValueError):
        build_algebra(KernelParams(7, 1), ramification_override={INF})
    with pytest.raises(ValueError):
        build_algebra(P7, ramification_override={3, 5, INF})


def test_switched_place_must_be_inert():
    with pytest.raises(NotImplementedError):
        build_algebra(P7, ramification_override={5, INF})


def test_epsilon_valuations():
    # R = O_E + bp^-1 eps0: the local eps_p has ord N = ord e at every p
    assert S7.e == 3
    for p in primerange(2, 100):
        assert valuation(S7.e0, p) - valuation(S7.Nb, p) == valuation(S7.e, p)


@pytest.mark.parametrize("args", [(7, 3, 5), (23, 5, 2), (7, 3, 2)])
def test_epsilon_at_conductor(args):
    P = KernelParams(*args)
    S = build_algebra(P)
    for p in primerange(2, 100):
        if P.c % p == 0:
            assert valuation(S.e, p) == 2 * valuation(P.c, p)


def _rand_el(draw):
    return tuple(tuple(F(draw(st.integers(-9, 9)), draw(st.integers(1, 4))) for _ in range(2)) for _ in range(2))


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_ijk_model_matches(data):
    g = _rand_el(data.draw)
    h = _rand_el(data.draw)
    al, be = S7.structure()
    lhs = S7.to_ijk(S7.mul(g, h))
    rhs = ijk_mul(S7.to_ijk(g), S7.to_ijk(h), al, be)
    assert lhs == rhs


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_norm_splits_and_multiplies(data):
    g = _rand_el(data.draw)
    h = _rand_el(data.draw)
    K = S7.K
    assert S7.norm(g) == K.norm(g[0]) + S7.e0 * K.norm(g[1])
    assert S7.norm(S7.mul(g, h)) == S7.norm(g) * S7.norm(h)


def test_eps0_traceless():
    eps = ((0, 0), (1, 0))
    assert S7.trace(eps) == 0
    sq = S7.mul(eps, eps)
    assert sq == ((-S7.e0, 0), (0, 0))


def test_identity_in_enumeration():
    # x = X / N(aj), so gamma = 1 appears as X = N(aj)
    Nj = S7.P.chi.G.reps[0].norm
    gs = list(enumerate_gamma(S7, 0, 0, 1))
    assert any(X == (Nj, 0) and Y == (0, 0) and eta == 1 and xi == 0 for X, Y, eta, xi in gs)


@pytest.mark.parametrize("S,a", [(S7, 1), (S7, 2), (S7, 4), (S7, 5), (S23, 1), (S23, 3), (S23, 6)])
def test_count_gamma_matches_box(S, a):
    n = S.P.chi.G.order
    for i in range(n):
        for j in range(n):
            assert count_gamma(S, i, j, a) == count_gamma_naive(S, i, j, a)


def test_count_gamma_at_conductor():
    S = build_algebra(KernelParams(7, 3, 2))
    for a in (1, 3, 5):
        assert count_gamma(S, 0, 0, a) == count_gamma_naive(S, 0, 0, a)


def test_nonintegral_a_empty():
    assert pairing_direct(S7, F(1, 2)) == {}
    assert pairing_orbital(S7, F(1, 2)) == {}


def test_degenerate_eps_vanishes_when_not_norm_type():
    assert degenerate_linking(S23, F(1), "eps") == 0
    assert linking_number(S23, F(5), 0, 1) == 0


def test_degenerate_one_constant():
    cst = measure_constants(S7)
    assert linking_number(S7, F(1), 1, 0) == pytest.approx(cst["h_c"] / cst["mu_index"])
    # a = 5: inert at 5 with odd valuation kills P(1)
    assert linking_number(S7, F(5), 1, 0) == 0


@pytest.mark.parametrize("S,a", [(S7, 4), (S7, 8), (S23, 6), (S23, 12)])
def test_linking_dual_mode(S, a):
    d = pairing_direct(S, a)
    assert any(eta not in (0, 1) for eta, _ in d)
    for eta, xi in d:
        cf = linking_number(S, F(a), eta, xi)
        dr = linking_number(S, F(a), eta, xi, mode="direct")
        assert abs(cf - dr) < 1e-10


def test_height_pairing_zero_cycle():
    assert height_pairing({}) == 0


def test_pairing_matrix_hermitian():
    # count(i, j) = count(j, i) and the weight conj(chi_i) chi_j flips to its conjugate
    G = S23.P.chi.G
    for a in (2, 3, 6):
        for i in range(G.order):
            for j in range(G.order):
                assert count_gamma(S23, i, j, a) == count_gamma(S23, j, i, a)


def test_generating_series_config():
    for a in (1, 2, 4, 8):
        r = generating_series_terms(P7, a, S7)
        assert abs(r["lhs"] - r["rhs"]) <= 1e-8 * max(1e-300, abs(r["rhs"]))
        assert r["route_err"] < 1e-9


def test_cycle_trace():
    assert cycle_trace_check(S7, [])
    with pytest.raises(NotImplementedError):
        cycle_trace_check(build_algebra(KernelParams(7, 3, 2)), [])


def test_multiplicities():
    assert m_a(5, F(25), F(1), F(0)) == 1
    assert m_a(5, F(625), F(1), F(0)) == 2
    assert m_a(5, F(5), F(1), F(0)) == 0
    assert M_k(5, 0, F(25)) == F(3, 2)
    assert M_k(5, 0, F(0)) == 0
    # xi a with odd nonnegative valuation
    assert m_a(5, F(1), F(-4), F(5)) == 1
    assert m_a(5, F(1), F(-24), F(25)) == 0
    assert m_a(5, F(1), F(4, 5), F(1, 5)) == 0
    assert m_bad(3, F(1, 3), P7) == 0


def test_tau_product_is_one():
    P = KernelParams(7, 1)
    for eta in (F(1, 6), F(1, 3), F(-1, 4), F(5, 2)):
        assert abs(tau_product(eta, 1 - eta, P) - 1) < 1e-12


def test_derivative_term_match_grid():
    P = KernelParams(7, 1)
    S = build_algebra(P, {5, INF})
    rows = 0
    for a in range(1, 25):
        r = derivative_term_match(P, 5, a, S)
        for t in r["terms"]:
            assert t["err"] < 1e-8
            assert t["companion_err"] < 1e-8
            assert abs(t["tau_product"] - 1) < 1e-12
            rows += 1
        assert r["aggregate_err"] <= 1e-8 * max(1.0, abs(r["aggregate_lhs"]))
    assert rows > 5


def test_derivative_violated_both_zero():
    P = KernelParams(7, 1)
    S = build_algebra(P, {5, INF})
    seen = 0
    for a in (6, 12, 18):
        for t in derivative_term_match(P, 5, a, S)["terms"]:
            if m_a(5, F(a), t["eta"], t["xi"]) == 0:
                assert t["lhs"] == 0 and t["rhs"] == 0
                seen += 1
    assert seen >= 3
    r = derivative_term_match(P, 5, 1, S)
    assert r["terms"] == [] and r["aggregate_lhs"] == 0 and r["aggregate_rhs"] == 0
