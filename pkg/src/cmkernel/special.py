"""Archimedean special functions: gamma factors, V_s, q_0, M_sigma, e_v."""
import math

import mpmath as mp


def G1(s):
    return complex(mp.pi ** (-mp.mpmathify(s) / 2) * mp.gamma(mp.mpmathify(s) / 2))


def G2(s):
    s = mp.mpmathify(s)
    return complex(2 * (2 * mp.pi) ** (-s) * mp.gamma(s))


def e_inf(a):
    """e_v(a) = 2 exp(-2 pi a) for a > 0, else 0."""
    a = float(a)
    return 2.0 * math.exp(-2 * math.pi * a) if a > 0 else 0.0


def q0(t):
    """int_1^oo exp(-x t) dx/x = E_1(t) for t > 0."""
    if t <= 0:
        raise ValueError("q0 needs t > 0")
    return float(mp.e1(t))


def M_sigma(sigma, t):
    """int_1^oo -dx / (x (1 - t x)^(1+sigma)) for t < 0, else 0."""
    if t >= 0:
        return 0.0
    u = -float(t)
    f = lambda x: -1 / (x * (1 + u * x) ** (1 + sigma))
    return float(mp.quad(f, [1, mp.inf]))


def V_closed(s, t):
    """V_s(t) by its modified Bessel closed form."""
    s = mp.mpmathify(s)
    t = mp.mpf(t.numerator) / t.denominator if hasattr(t, "denominator") else mp.mpf(t)
    if t == 0:
        raise ValueError("V_s(0) not needed")
    C = 2 * mp.pi ** (s + 0.5) / mp.gamma(s + 0.5)
    x = 2 * mp.pi * abs(t)
    return -1j * C * abs(t) ** s * (mp.sign(t) * mp.besselk(1 - s, x) + mp.besselk(s, x))


def V_quad(s, t):
    """V_s(t) by oscillatory quadrature of the defining integral (oracle)."""
    s = mp.mpmathify(s)
    t = mp.mpf(t.numerator) / t.denominator if hasattr(t, "denominator") else mp.mpf(t)
    f = lambda x: mp.exp(-2j * mp.pi * t * x) / ((1j + x) * (1 + x * x) ** (s - 0.5))
    om = 2 * mp.pi * abs(t)
    return mp.quadosc(f, [0, mp.inf], omega=om) + mp.quadosc(f, [-mp.inf, 0], omega=om)


def exp_q0(u, t):
    """e^u q_0(t) evaluated without underflow."""
    if t <= 0:
        raise ValueError("q0 needs t > 0")
    return float(mp.exp(u) * mp.e1(t))


def dV_half(t):
    """d/ds V_s(t) at s = 1/2 for t < 0: -2 pi i e^{-2 pi t} q_0(-4 pi t)."""
    t = float(t)
    return -2j * math.pi * exp_q0(-2 * math.pi * t, -4 * math.pi * t)


def dV_half_numeric(t, h=None):
    return complex(mp.diff(lambda s: V_closed(s, t), mp.mpf(0.5)))


def eisenstein_inf(b, s):
    """Archimedean Eisenstein coefficient 2i|b| [K_{1-s} - sgn(b) K_s](2 pi |b|)."""
    s = mp.mpmathify(s)
    b = mp.mpf(b.numerator) / b.denominator if hasattr(b, "denominator") else mp.mpf(b)
    x = 2 * mp.pi * abs(b)
    return 2j * abs(b) * (mp.besselk(1 - s, x) - mp.sign(b) * mp.besselk(s, x))
