"""Local and global Whittaker coefficients of theta, Eisenstein and the symmetrized kernel over Q."""
from fractions import Fraction
from math import gcd, log, sqrt, exp, pi

from sympy import primefactors

from .arith import (INF, Q, valuation, absval, hilbert, kronecker, local_epsilon_omega,
                    primes_of)
from .cmfield import CMField, RayClassGroup, HeckeCharacter, chi_local, is_norm_type
from .special import eisenstein_inf, e_inf, exp_q0, M_sigma


class KernelParams:
    """(D, m, c, s, chi) with r = m c^2; base constants delta = 1, d = D."""

    def __init__(self, D, m=1, c=1, s_cond=1, ks=None, chi=None):
        if gcd(m * s_cond, D) != 1 or gcd(c, D) != 1:
            raise ValueError("m, s and c must be prime to D")
        if gcd(m, c) != 1:
            raise ValueError("m must be prime to c")
        if c % s_cond:
            raise ValueError("s must divide c")
        self.D = D
        self.m = m
        self.c = c
        self.s_cond = s_cond
        self.r = m * c * c
        if chi is None:
            K = CMField(D)
            G = RayClassGroup(K, c)
            chi = HeckeCharacter(G, ks)
        self.chi = chi
        self.K = chi.K
        self.S = primefactors(D)
        self._loc = {}

    def __repr__(self):
        return "KernelParams(D=%d, m=%d, c=%d, s=%d, chi=%s)" % (
            self.D, self.m, self.c, self.s_cond, self.chi.ks)

    def loc(self, p):
        if p not in self._loc:
            self._loc[p] = chi_local(self.chi, p)
        return self._loc[p]

    def omega_v(self, x, v):
        return hilbert(x, -self.D, v)

    def absd(self, p):
        return Fraction(1, p ** valuation(self.D, p)) if self.D % p == 0 else Fraction(1)

    def epsilon_local(self, v, s):
        if v == INF:
            return -1.0
        if self.r % v == 0:
            return self.omega_v(self.r, v) * float(absval(self.r, v)) ** (2 * s - 1)
        return float(self.absd(v)) ** (2 * s - 1)

    def epsilon_global(self, s):
        out = self.epsilon_local(INF, s)
        for p in set(primefactors(self.D)) | set(primefactors(self.r)):
            out *= self.epsilon_local(p, s)
        return out

    def sign(self):
        """epsilon(1/2, r) = -omega(r)."""
        return -kronecker(-self.D, self.r)

    def is_norm_type(self):
        return is_norm_type(self.chi)


def _f(x):
    return float(x)


def theta_local(v, a, P, weight=-1):
    """B_v(a; theta) (weight -1) or B_v(a; theta_chi) (weight 0)."""
    a = Q(a)
    if v == INF:
        b = -a if weight == 0 else a
        return abs(_f(b)) ** 0.5 * e_inf(-b)
    p = v
    k = valuation(a, p)
    h = _f(absval(a, p)) ** 0.5
    L = P.loc(p)
    if L.kind == "inert":
        if L.ramified:
            return h if k == 0 else 0.0
        if k >= 0 and k % 2 == 0:
            return h * L.value ** (k // 2)
        return 0.0
    if L.kind == "split":
        if k < 0:
            return 0.0
        al, be = L.alpha, L.beta
        return h * sum(_pw(al, i) * _pw(be, k - i) for i in range(k + 1))
    if k < 0:
        return 0.0
    return h * L.value ** k


def _pw(x, n):
    return 1 if n == 0 else x ** n


def eisenstein_local(v, b, s, P):
    """B_v(b; E_{r,s}) with delta = 1."""
    b = Q(b)
    if v == INF:
        return complex(eisenstein_inf(b, s))
    p = v
    k = valuation(b, p)
    if P.D % p == 0:
        if k < 0:
            return 0j
        return _f(absval(b, p)) ** s * _f(P.absd(p)) ** (2 * s - 0.5) * local_epsilon_omega(p, P.D)
    kr = valuation(P.r, p) if P.r % p == 0 else 0
    if k < kr:
        return 0j
    w = kronecker(-P.D, p)
    x = p ** (2 * s - 1)
    return _f(absval(b, p)) ** s * sum((x * w) ** j for j in range(k - kr + 1))


def kernel_local(v, a, eta, xi, s, P, weight=-1):
    """B_v(a, eta, xi; Theta_{r,s}) from the theta and Eisenstein factors."""
    a, eta, xi = Q(a), Q(eta), Q(xi)
    th = theta_local(v, eta * a, P, weight)
    if th == 0:
        return 0j
    E = eisenstein_local(v, xi * a, s, P)
    if v != INF and P.D % v == 0:
        E = E + P.omega_v(-eta * xi, v) * _f(P.absd(v)) ** (2 * s - 1) * eisenstein_local(v, xi * a, 1 - s, P)
    return th * E


def local_sign_ok(v, eta, xi, P):
    return P.omega_v(-eta * xi, v) == round(P.epsilon_local(v, 0.5))


def kernel_local_half(v, a, eta, xi, P):
    """Closed form of B_v(a, eta, xi; Theta_r) at s = 1/2; zero off the sign pattern."""
    a, eta, xi = Q(a), Q(eta), Q(xi)
    if not local_sign_ok(v, eta, xi, P):
        return 0j
    hx = abs(_f(eta * xi)) ** 0.5
    if v == INF:
        return 2j * hx * abs(_f(a)) * e_inf(-a)
    p = v
    ab = _f(absval(a, p)) * _f(absval(eta * xi, p)) ** 0.5
    ka = valuation(eta * a, p)
    L = P.loc(p)
    if P.D % p == 0:
        if ka < 0 or valuation(xi * a, p) < 0:
            return 0j
        return 2 * L.value ** ka * ab * _f(P.absd(p)) ** 0.5 * local_epsilon_omega(p, P.D)
    kr = valuation(P.r, p) if P.r % p == 0 else 0
    kx = valuation(xi * a, p) - kr
    if L.kind == "split":
        if ka < 0 or kx < 0:
            return 0j
        return ab * (kx + 1) * sum(_pw(L.alpha, i) * _pw(L.beta, ka - i) for i in range(ka + 1))
    if L.ramified:
        if ka == 0 and kx >= 0 and kx % 2 == 0:
            return complex(ab)
        return 0j
    if ka >= 0 and kx >= 0 and ka % 2 == 0 and kx % 2 == 0:
        return ab * L.value ** (ka // 2)
    return 0j


def diff_set(eta, xi, P, extra=()):
    eta, xi = Q(eta), Q(xi)
    places = {INF} | set(P.S) | set(primefactors(P.r)) | set(primes_of(eta * xi)) | set(extra)
    return {v for v in places if not local_sign_ok(v, eta, xi, P)}


def kernel_local_deriv(w, a, eta, xi, P):
    """Closed form of d/ds B_w(a, eta, xi; Theta_{r,s}) at 1/2 for w in Diff."""
    a, eta, xi = Q(a), Q(eta), Q(xi)
    if w not in diff_set(eta, xi, P, extra=[w] if w != INF else []):
        raise ValueError("derivative formula applies only at the difference place")
    hx = abs(_f(eta * xi)) ** 0.5
    if w == INF:
        if eta * a < 0 < xi * a:
            af = _f(a)
            return -4j * hx * abs(af) * exp_q0(2 * pi * af, 4 * pi * af * _f(xi))
        return 0j
    p = w
    ab = _f(absval(a, p)) * _f(absval(eta * xi, p)) ** 0.5
    L = P.loc(p)
    ka = valuation(eta * a, p)
    if P.D % p == 0:
        if ka < 0 or valuation(xi * a, p) < 0:
            return 0j
        lg = log(_f(absval(xi * a * P.D, p)))
        return 2 * ab * _f(P.absd(p)) ** 0.5 * L.value ** ka * local_epsilon_omega(p, P.D) * lg
    if L.kind != "inert":
        raise ValueError("difference place must be nonsplit")
    kx = valuation(xi * a / P.r, p)
    if kx < 0 or kx % 2 == 0:
        return 0j
    lg = log(_f(absval(xi * a / P.r * p, p)))
    if L.ramified:
        return ab * lg if ka == 0 else 0j
    if ka >= 0 and ka % 2 == 0:
        return ab * lg * L.value ** (ka // 2)
    return 0j


def kernel_local_deriv_numeric(v, a, eta, xi, P, h=1e-4, weight=-1):
    """Central difference in s at 1/2 with one Richardson step."""
    f = lambda s: kernel_local(v, a, eta, xi, s, P, weight)
    d1 = (f(0.5 + h) - f(0.5 - h)) / (2 * h)
    d2 = (f(0.5 + h / 2) - f(0.5 - h / 2)) / h
    return (4 * d2 - d1) / 3


def pair_places(a, eta, xi, P):
    return sorted(set(P.S) | set(primefactors(P.r)) | set(primes_of(Q(a))) | set(primes_of(Q(eta))) | set(primes_of(Q(xi))))


def kernel_pair_half(a, eta, xi, P):
    """prod_v B_v(a, eta, xi; Theta_r) using closed forms."""
    out = kernel_local_half(INF, a, eta, xi, P)
    for p in pair_places(a, eta, xi, P):
        if out == 0:
            break
        out *= kernel_local_half(p, a, eta, xi, P)
    return out


def kernel_pair_product(a, eta, xi, s, P, weight=-1):
    out = kernel_local(INF, a, eta, xi, s, P, weight)
    for p in pair_places(a, eta, xi, P):
        if out == 0:
            break
        out *= kernel_local(p, a, eta, xi, s, P, weight)
    return out


def pair_supported(a, eta, xi, P):
    """Finite support and parity conditions of the s = 1/2 closed forms (characters ignored)."""
    for p in pair_places(a, eta, xi, P):
        ka = valuation(eta * a, p)
        if ka < 0:
            return False
        if P.D % p == 0:
            if valuation(xi * a, p) < 0:
                return False
            continue
        kx = valuation(xi * a / P.r, p)
        if kx < 0:
            return False
        st = P.K.split_type(p)
        if st == "inert" and (kx % 2 or ka % 2):
            return False
        if st == "inert" and P.loc(p).ramified and ka != 0:
            return False
    return True


def enumerate_pairs(a, P, mode="half", w=None, tail=1e-14, kmax=None):
    """Pairs (eta, xi) with eta*a, xi*a integral that can carry a nonzero term.

    mode 'half': Diff empty and supported (0 < eta < 1).
    mode 'deriv': Diff = {w}; for w = INF the pairs have eta*a < 0 < xi*a and are
    truncated once the q_0 factor drops below tail.
    mode 'weight0': xi*a < 0 < eta*a, truncated by the exponential factor.
    """
    a = Q(a)
    if a.denominator != 1:
        return []
    A = abs(a.numerator)
    sg = 1 if a > 0 else -1
    out = []
    if mode == "half" or (mode == "deriv" and w != INF):
        for k in range(1, A):
            eta = Fraction(k, A)
            xi = 1 - eta
            Df = diff_set(eta, xi, P, extra=[w] if mode == "deriv" else [])
            if mode == "half" and Df:
                continue
            if mode == "deriv" and Df != {w}:
                continue
            if mode == "half" and not pair_supported(a, eta, xi, P):
                continue
            out.append((eta, xi))
        return out
    af = abs(_f(a))
    k = 1
    while not (kmax and k > kmax):
        big = Fraction(A + k, A)
        small = Fraction(-k, A)
        if mode == "deriv":
            # eta*a < 0 < xi*a
            eta, xi = (small, big) if sg > 0 else (big, small)
            if exp(-4 * pi * af * _f(abs(xi)) + 2 * pi * af) < tail:
                break
            if diff_set(eta, xi, P) == {INF}:
                out.append((eta, xi))
        elif mode == "weight0":
            # xi*a < 0 < eta*a
            eta, xi = (big, small) if sg > 0 else (small, big)
            if exp(-2 * pi * af * (1 + 2 * _f(abs(xi)))) < tail:
                break
            out.append((eta, xi))
        else:
            raise ValueError("unknown mode %r" % mode)
        k += 1
    return out


def theta_global(a, P, weight=-1, a_inf=None):
    """B(a; theta) at the idele with finite part a and archimedean part a_inf (default a)."""
    a = Q(a)
    out = theta_local(INF, a if a_inf is None else Q(a_inf), P, weight)
    for p in sorted(set(P.S) | set(primes_of(a)) | set(primefactors(P.c))):
        if out == 0:
            break
        out *= theta_local(p, a, P, weight)
    return out


def eisenstein_global(a, s, P):
    a = Q(a)
    out = eisenstein_local(INF, a, s, P)
    for p in sorted(set(P.S) | set(primes_of(a)) | set(primefactors(P.r))):
        out *= eisenstein_local(p, a, s, P)
    return out


def L1_omega_completed(P):
    """L(1, omega) including the archimedean factor G_1(2) = 1/pi: 2 h / (w sqrt D)."""
    K = P.K
    return 2 * K.class_number() / (K.w * sqrt(P.D))


def A0_degenerate(a, P):
    """A_0(a; Theta_r) at s = 1/2 for a principal idele: L(1,omega) B(a;theta) (1 - omega(r))."""
    a = Q(a)
    return L1_omega_completed(P) * theta_global(a, P) * (1 - kronecker(-P.D, P.r))


def A1_degenerate(a, P):
    """A_1(a; Theta_r) at s = 1/2: 2 nu(r) |a r|^{1/2} B(a r^{-1}; theta) L(1, omega).

    Nonzero only for norm-type chi with c = 1; only trivial chi (nu = 1) is supported.
    """
    if not P.is_norm_type():
        return 0j
    if P.c != 1:
        return 0j
    if not P.chi.is_trivial():
        raise NotImplementedError("A_1 for nontrivial norm-type chi needs nu; not supported")
    a = Q(a)
    # r is a finite idele: |a r|_A = 1/r and a r^-1 keeps the archimedean component a
    return 2 * (1 / P.r) ** 0.5 * theta_global(a / P.r, P, a_inf=a) * L1_omega_completed(P)


def kernel_global(a, P, with_degenerate=True):
    """B(a; Theta_r) at s = 1/2 and its pieces."""
    a = Q(a)
    pairs = enumerate_pairs(a, P, "half")
    tot = 0j
    terms = []
    for eta, xi in pairs:
        t = kernel_pair_half(a, eta, xi, P)
        terms.append((eta, xi, t))
        tot += t
    A0 = A0_degenerate(a, P) if with_degenerate else 0j
    A1 = A1_degenerate(a, P) if with_degenerate else 0j
    return {"value": tot + A0 + A1, "A0": A0, "A1": A1, "pairs": terms}


def deriv_pair(a, eta, xi, w, P):
    """B(a, eta, xi; Theta'_r) = B_w' * prod_{v != w} B_v."""
    out = kernel_local_deriv(w, a, eta, xi, P)
    if out == 0:
        return out
    places = [INF] + pair_places(a, eta, xi, P) + ([w] if w != INF else [])
    for v in sorted(set(places), key=str):
        if v == w:
            continue
        out *= kernel_local_half(v, a, eta, xi, P)
    return out


def projection_coeff_finite(w, a, P):
    """B^w(a; Phi_r) as the finite sum over pairs with Diff = {w}."""
    if P.sign() != -1:
        raise ValueError("derivative kernel requires sign -1")
    a = Q(a)
    tot = 0j
    terms = []
    for eta, xi in enumerate_pairs(a, P, "deriv", w=w):
        t = abs(_f(eta * xi)) ** 0.5 * kernel_local_deriv(w, a, eta, xi, P).conjugate()
        for v in pair_places(a, eta, xi, P):
            if v != w:
                t *= kernel_local_half(v, a, eta, xi, P).conjugate()
        terms.append((eta, xi, -2j * t))
        tot += -2j * t
    return {"value": tot, "terms": terms}


def projection_coeff_arch(sigma, a, P, kmax=4000):
    """B^inf(sigma, a; Phi_r) truncated at kmax; returns value and a crude tail estimate."""
    if P.sign() != -1:
        raise ValueError("derivative kernel requires sign -1")
    a = Q(a)
    A = abs(a.numerator)
    tot = 0j
    last = 0.0
    for k in range(1, kmax + 1):
        xi = Fraction(-k, A)
        eta = 1 - xi
        if diff_set(eta, xi, P) != {INF}:
            continue
        t = abs(_f(eta * xi)) ** 0.5 * M_sigma(sigma, _f(xi))
        if t == 0:
            continue
        for v in pair_places(a, eta, xi, P):
            t *= kernel_local_half(v, a, eta, xi, P).conjugate()
        tot += -2j * t
        last = abs(t)
    return {"value": tot, "tail_est": last}


def const_sigma_to_zero(f, sigmas=(0.2, 0.1, 0.05, 0.025)):
    """Constant term of f(sigma) as sigma -> 0 by a linear least squares fit c0 + c1 sigma."""
    import numpy as np
    ys = np.array([complex(f(s)) for s in sigmas])
    X = np.vstack([np.ones(len(sigmas)), np.array(sigmas)]).T
    c = np.linalg.lstsq(X, ys, rcond=None)[0]
    return complex(c[0])
