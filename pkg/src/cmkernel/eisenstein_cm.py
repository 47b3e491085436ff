"""Real-analytic Eisenstein series at CM points and the torus-average identity against L(tau, chi)."""
import math
from fractions import Fraction

import mpmath as mp

from .cmfield import chi_local, ideal_coeff

DPS = 30


def reduce_point(z):
    """SL_2(Z)-reduce z in the upper half plane."""
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("point must lie in the upper half plane")
    for _ in range(1000):
        z = complex(z.real - math.floor(z.real + 0.5), z.imag)
        if abs(z) < 1 - 1e-15:
            z = -1 / z
        else:
            return z
    raise RuntimeError("reduction did not terminate")


def eisenstein_star(z, s, tol=1e-20):
    """E*(z, s) = sum' y^s / |m + n z|^{2s} by the Chowla-Selberg expansion.

    Returns (value, tail_bound); z is reduced first, so y >= sqrt(3)/2.
    """
    z = reduce_point(z)
    with mp.workdps(DPS):
        s = mp.mpf(s)
        x, y = mp.mpf(z.real), mp.mpf(z.imag)
        nu = s - mp.mpf(1) / 2
        out = 2 * mp.zeta(2 * s) * y ** s
        out += 2 * mp.sqrt(mp.pi) * mp.gamma(nu) / mp.gamma(s) * mp.zeta(2 * s - 1) * y ** (1 - s)
        pref = 8 * mp.pi ** s * mp.sqrt(y) / mp.gamma(s)
        n = 1
        tail = mp.inf
        while True:
            sig = sum(mp.mpf(d) ** (1 - 2 * s) for d in range(1, n + 1) if n % d == 0)
            t = pref * mp.mpf(n) ** nu * sig * mp.besselk(nu, 2 * mp.pi * n * y) * mp.cos(2 * mp.pi * n * x)
            out += t
            # |sigma_{1-2s}(k)| <= zeta(2s-1) and K_nu(u) <= K_nu(u0) e^{-(u-u0)} for u >= u0
            u = 2 * mp.pi * (n + 1) * y
            q = mp.exp(-2 * mp.pi * y) * mp.mpf(n + 2) ** nu / mp.mpf(n + 1) ** nu
            if q < 1:
                head = pref * mp.mpf(n + 1) ** nu * mp.zeta(2 * s - 1) * mp.besselk(nu, u)
                tail = head / (1 - q)
                if tail < tol * abs(out):
                    break
            n += 1
            if n > 10000:
                raise RuntimeError("Fourier expansion failed to converge")
        return float(out), float(tail)


def eisenstein_naive(z, s, R):
    """Direct lattice sum of E*(z, s) over |m + n z| <= R plus the continuum tail (oracle)."""
    z = complex(z)
    y = z.imag
    s = float(s)
    tot = 0.0
    nmax = int(R / y) + 1
    for n in range(-nmax, nmax + 1):
        c = n * z.real
        h2 = R * R - (n * y) ** 2
        if h2 < 0:
            continue
        h = math.sqrt(h2)
        for m in range(math.ceil(-c - h), math.floor(-c + h) + 1):
            if m == 0 and n == 0:
                continue
            r2 = (m + c) ** 2 + (n * y) ** 2
            if r2 <= R * R:
                tot += r2 ** (-s)
    tail = 2 * math.pi * R ** (2 - 2 * s) / ((2 * s - 2) * y)
    return y ** s * (tot + tail), y ** s * tail


def eisenstein_rows(z, s, N=12):
    """E*(z, s) summed row by row: rows |n| <= N by nsum over m, far rows by their continuum value.

    The far-row error is of size exp(-2 pi (N + 1) y) (oracle independent of the Bessel expansion).
    """
    z = complex(z)
    with mp.workdps(DPS):
        s = mp.mpf(s)
        x, y = mp.mpf(z.real), mp.mpf(z.imag)
        tot = 2 * mp.zeta(2 * s)
        for n in range(1, N + 1):
            f = lambda m: ((m + n * x) ** 2 + (n * y) ** 2) ** (-s)
            tot += 2 * mp.nsum(f, [-mp.inf, mp.inf])
        row = mp.sqrt(mp.pi) * mp.gamma(s - mp.mpf(1) / 2) / mp.gamma(s) * y ** (1 - 2 * s)
        tot += 2 * row * mp.zeta(2 * s - 1, N + 1)
        return float(y ** s * tot)


class EisensteinCMFrame:
    """Frame data for the torus of E = Q(sqrt(-D)) in GL_2 at level c = s = 1."""

    def __init__(self, chi, tau):
        if chi.c != 1:
            raise NotImplementedError("only level c = s = 1 frames are implemented")
        tau = complex(tau)
        if tau.real <= 1.25:
            raise ValueError("outside implemented convergence region")
        self.chi = chi
        self.K = K = chi.K
        self.D = K.D
        self.tau = tau
        self.Delta = K.D if K.D % 4 else K.D // 4
        # rows: Z-basis 1, w of O_E in the basis 1, sqrt(-Delta)
        if K.D % 4:
            self.basis_matrix = ((Fraction(1), Fraction(0)), (Fraction(1, 2), Fraction(1, 2)))
        else:
            self.basis_matrix = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
        self.det_j_abs = math.sqrt(self.D) / 2

    def det_relation(self):
        """4 Delta det(M)^2 = D with M the change of basis to O_E."""
        (a, b), (c, d) = self.basis_matrix
        return 4 * self.Delta * (a * d - b * c) ** 2 == self.D

    def points(self):
        """(class index, CM point z, quadratic form (A, B, C) of z) per torus class."""
        out = []
        for i, I in enumerate(self.chi.G.reps):
            z = complex(I.B + I.C * self.K.to_complex((0, 1))) / I.A
            out.append((i, z, point_form(self.K, I)))
        return out


def point_form(K, I):
    """Primitive (a, b, c) with a z^2 + b z + c = 0 for z = (B + C w) / A."""
    A, B, C = I.A, I.B, I.C
    f = (A * A, -2 * A * B - K.t * A * C, B * B + K.t * B * C + K.n * C * C)
    g = math.gcd(math.gcd(f[0], f[1]), f[2])
    return tuple(x // g for x in f)


def eisenstein_value(frame, z):
    """E'_tau at the torus point with CM point z: (1/2) pi^-tau Gamma(tau) E*(z, tau)."""
    tau = frame.tau.real
    E, tail = eisenstein_star(z, tau)
    c = 0.5 * math.pi ** (-tau) * math.gamma(tau)
    return c * E, c * tail


def hecke_L(chi, s, N=None):
    """Completed L(s, chi) = G_2(s) sum chi(n) N(n)^-s for a class group character (c = 1).

    Evaluated by the smoothed functional equation Lambda(s) = Lambda(1 - s) with
    Lambda(s) = (sqrt(D)/2pi)^s Gamma(s) L_f(s); the trivial character adds its pole terms.
    """
    if chi.c != 1:
        raise NotImplementedError("only unramified characters are implemented")
    K = chi.K
    D = K.D
    with mp.workdps(DPS):
        s = mp.mpf(s)
        c0 = 2 * mp.pi / mp.sqrt(D)
        if N is None:
            N = int(60 / float(c0)) + 10
        loc = {}

        def lf(p):
            if p not in loc:
                loc[p] = chi_local(chi, p)
            return loc[p]

        lam = mp.mpf(0)
        for n in range(1, N + 1):
            a = ideal_coeff(lf, n)
            if abs(a) < 1e-14:
                continue
            c = c0 * n
            lam += mp.mpf(a.real) * (c ** (-s) * mp.gammainc(s, c) + c ** (s - 1) * mp.gammainc(1 - s, c))
        if chi.is_trivial():
            lam += mp.mpf(K.class_number()) / K.w * (1 / (s - 1) - 1 / s)
        tail = float(c0 * N) ** 2 * math.exp(-float(c0 * N))
        return complex(2 * lam / mp.sqrt(D) ** s), float(lam), tail


def verify_cm_identity(chi, tau):
    """LHS = D^{tau/2} (1/2) L(tau, chi) against sum over torus classes of chi(t) E'_tau(t)."""
    fr = EisensteinCMFrame(chi, tau)
    t = fr.tau.real
    L, lam, ltail = hecke_L(chi, t)
    lhs = fr.D ** (t / 2) * 0.5 * L
    K = fr.K
    rhs = 0j
    tails = 0.0
    vals = []
    for i, z, _ in fr.points():
        v, tb = eisenstein_value(fr, z)
        # chi(t) = chi(b^-1) for the torus point attached to the ideal b
        rhs += 2 / K.w * chi.on_class(i).conjugate() * v
        tails += 2 / K.w * tb
        vals.append(v)
    return {"lhs": lhs, "rhs": rhs, "abs_err": abs(lhs - rhs), "tail_bound": tails + ltail,
            "values": vals, "L": L, "det_relation": fr.det_relation()}


def divisor_coeff(a, tau, chi0=None):
    """Finite part of B(a; E_tau) for s = 1: prod_p sum_k p^{k(2 tau - 1)} chi0^-1(p^k)."""
    from sympy import factorint
    out = 1
    for p, e in factorint(a).items():
        x = p ** (2 * tau - 1) * (1 if chi0 is None else complex(chi0(p)).conjugate())
        out *= sum(x ** k for k in range(e + 1))
    return out
