"""Definite quaternion algebras B = E + E eps0 over Q, CM cycles on R^x, linking numbers and pairings."""
from collections import defaultdict
from fractions import Fraction
from math import gcd, isqrt, log, sqrt

from sympy import divisors, primefactors

from .arith import INF, Q, absval, hilbert, local_epsilon_omega, primes_of, valuation
from .cmfield import Ideal, congruent, is_norm_type, residue_units_order
from .localfield import _index_units, degenerate_core, orbital_core


def ideals_of_norm(K, n):
    """Integral ideals of O_E of norm n, in HNF."""
    out = []
    for C in divisors(n):
        A = n // C
        if A % C:
            continue
        for B in range(A):
            I = Ideal(K, (A, B, C))
            if all(I.contains(K.mul(v, (0, 1))) for v in I.basis):
                out.append(I)
    return out


def lattice_points(K, I, bound):
    """Elements of the integral ideal I with norm <= bound, keyed by norm."""
    v1, v2 = I.basis
    a = K.norm(v1)
    c = K.norm(v2)
    b = K.norm((v1[0] + v2[0], v1[1] + v2[1])) - a - c
    Dl = 4 * a * c - b * b
    out = defaultdict(list)
    if bound < 0:
        return out
    nmax = isqrt(4 * a * bound // Dl) + 1
    for n in range(-nmax, nmax + 1):
        r = 4 * a * bound - Dl * n * n
        if r < 0:
            continue
        s = isqrt(r)
        for m in range((-b * n - s) // (2 * a) - 1, (-b * n + s) // (2 * a) + 2):
            N = a * m * m + b * m * n + c * n * n
            if N <= bound:
                out[N].append((m * v1[0] + n * v2[0], m * v1[1] + n * v2[1]))
    return out


def ijk_mul(x, y, al, be):
    """Product in (al, be / Q) on the basis 1, i, j, k = ij."""
    a0, a1, a2, a3 = x
    b0, b1, b2, b3 = y
    return (a0 * b0 + al * a1 * b1 + be * a2 * b2 - al * be * a3 * b3,
            a0 * b1 + a1 * b0 - be * a2 * b3 + be * a3 * b2,
            a0 * b2 + a2 * b0 + al * a1 * b3 - al * a3 * b1,
            a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1)


class QuaternionSetup:
    """B = E + E eps0, eps0^2 = -e0, eps0 t = conj(t) eps0; R = O_E + b eps0 with b = bp^-1.

    e0 = e N(bp) so that the local orders R_p = O_E,p + O_E,p eps_p have ord N(eps_p) = ord_p e.
    """

    def __init__(self, P, e, target, nmax=200):
        self.P = P
        self.K = K = P.K
        self.e = int(e)
        self.target = frozenset(target)
        Dp = primefactors(P.D)
        for n in range(1, nmax):
            if gcd(n, P.c) != 1:
                continue
            ids = ideals_of_norm(K, n)
            if not ids:
                continue
            e0 = self.e * n
            if all(hilbert(-P.D, -e0, p) == (-1 if p in self.target else 1) for p in Dp):
                self.bp, self.Nb, self.e0 = ids[0], n, Fraction(e0)
                break
        else:
            raise ValueError("no eps found within bound; enlarge search")
        self.ramified = self.ramification()
        if self.ramified != self.target | {INF}:
            raise ValueError("no definite algebra with this invariant set")

    def ramification(self):
        e0 = self.e0
        ps = set(primes_of(2 * self.P.D * e0)) | {INF}
        return frozenset(p for p in ps if hilbert(-self.P.D, -e0, p) == -1)

    def mul(self, g, h):
        K = self.K
        u1, v1 = g
        u2, v2 = h
        a = K.mul(u1, u2)
        b = K.mul(v1, K.conj(v2))
        c = K.mul(u1, v2)
        d = K.mul(v1, K.conj(u2))
        return ((a[0] - self.e0 * b[0], a[1] - self.e0 * b[1]), (c[0] + d[0], c[1] + d[1]))

    def norm(self, g):
        return self.K.norm(g[0]) + self.e0 * self.K.norm(g[1])

    def trace(self, g):
        return self.K.trace(g[0])

    def eta_xi(self, g):
        N = Fraction(self.norm(g))
        return self.K.norm(g[0]) / N, self.e0 * self.K.norm(g[1]) / N

    def to_ijk(self, g):
        """Coordinates on 1, i, j, k with i = 2w - t, j = eps0."""
        t = self.K.t
        (x0, x1), (y0, y1) = g
        h = Fraction(1, 2)
        return (x0 + x1 * t * h, x1 * h, y0 + y1 * t * h, y1 * h)

    def structure(self):
        return (-self.P.D, -self.e0)


def base_ramification(P):
    """Finite p with eps_p(1/2, r) = -1."""
    return frozenset(p for p in primefactors(P.r) if P.epsilon_local(p, 0.5) < 0)


def build_algebra(P, ramification_override=None):
    """Definite B ramified at infinity and at the target finite set (default: the sign set of r)."""
    base = base_ramification(P)
    target = frozenset(base if ramification_override is None
                       else (p for p in ramification_override if p != INF))
    if len(target) % 2 == 0:
        raise ValueError("no definite algebra with this invariant set")
    e = P.r
    for w in target ^ base:
        if P.K.split_type(w) != "inert" or (P.D * P.r) % w == 0:
            raise NotImplementedError("switched place must be inert and prime to D r")
        e *= w
    return QuaternionSetup(P, e, target)


# ---------- torus data ----------

def units_mod_c(K, c):
    return [u for u in K.units() if congruent(u, (1, 0), c)]


def center_index(c):
    """[mu_U : Z(Q) cap U] denominator: Z(Q) cap U = {+-1} when c <= 2."""
    return 2 if c <= 2 else 1


def measure_constants(S):
    P = S.P
    K = S.K
    mu = units_mod_c(K, P.c)
    return {
        "mu_U": len(mu),
        "mu_index": len(mu) // center_index(P.c),
        "lambda_U": 1 if P.c <= 2 else 2,
        "Z_index": 1 if P.c <= 2 else sum(1 for x in range(1, P.c) if gcd(x, P.c) == 1) // 2,
        "H_F": 1,
        "units_index": residue_units_order(K, P.c),
        "h_c": P.chi.G.order,
    }


# ---------- direct route ----------

def _lattices(S, i, j):
    G = S.P.chi.G
    Ai, Aj = G.reps[i], G.reps[j]
    return Ai * Aj.conj(), Ai * Aj * S.bp.conj(), Ai.norm, Aj.norm


def enumerate_gamma(S, i, j, a):
    """gamma = x + y eps0 in ai R aj^-1 of norm a N(ai)/N(aj), x = 1 mod c; yields (X, Y, eta, xi).

    x = X / N(aj) and y = Y / (N(aj) N(bp)) with X in ai conj(aj), Y in ai aj conj(bp).
    """
    I, J, Ni, Nj = _lattices(S, i, j)
    Nb, e, c = S.Nb, S.e, S.P.c
    M = a * Ni * Nj * Nb
    Xs = lattice_points(S.K, I, M // Nb)
    Ys = lattice_points(S.K, J, M // e)
    for nX in sorted(Xs):
        rest = M - Nb * nX
        if rest % e:
            continue
        Yl = Ys.get(rest // e)
        if not Yl:
            continue
        eta = Fraction(Nb * nX, M)
        for X in Xs[nX]:
            if c > 1 and not congruent(X, (Nj, 0), c):
                continue
            for Y in Yl:
                yield X, Y, eta, 1 - eta


def count_gamma_naive(S, i, j, a):
    """Same count by a box over all four integer coordinates (oracle)."""
    I, J, Ni, Nj = _lattices(S, i, j)
    K, Nb, e, c = S.K, S.Nb, S.e, S.P.c
    M = a * Ni * Nj * Nb
    out = defaultdict(int)
    bx = isqrt(4 * M // Nb) + 2
    by = isqrt(4 * M // e) + 2
    Ys = defaultdict(int)
    for y0 in range(-by, by + 1):
        for y1 in range(-by, by + 1):
            Y = (y0, y1)
            if J.contains(Y):
                Ys[K.norm(Y)] += 1
    for x0 in range(-bx, bx + 1):
        for x1 in range(-bx, bx + 1):
            X = (x0, x1)
            nX = K.norm(X)
            if Nb * nX > M or not I.contains(X):
                continue
            if c > 1 and not congruent(X, (Nj, 0), c):
                continue
            rest = M - Nb * nX
            if rest % e == 0 and Ys.get(rest // e):
                out[Fraction(Nb * nX, M)] += Ys[rest // e]
    return dict(out)


def count_gamma(S, i, j, a):
    out = defaultdict(int)
    for _, _, eta, _ in enumerate_gamma(S, i, j, a):
        out[eta] += 1
    return dict(out)


def pairing_direct(S, a):
    """<P_{chi,a}, P_chi>_U bucketed by (eta, xi), by lattice enumeration over torus class pairs."""
    P = S.P
    G = P.chi.G
    cst = measure_constants(S)
    vals = [P.chi.on_class(i) for i in range(G.order)]
    w = 1.0 / (cst["mu_index"] * cst["mu_U"])
    out = defaultdict(complex)
    if Q(a).denominator != 1 or a <= 0 or gcd(int(a), P.c) != 1:
        return dict(out)
    for i in range(G.order):
        for j in range(G.order):
            f = vals[i].conjugate() * vals[j] * w
            for eta, n in count_gamma(S, i, j, int(a)).items():
                out[(eta, 1 - eta)] += f * n
    return dict(out)


# ---------- orbital route ----------

def realizable(S, eta, xi):
    """(eta, xi) comes from some gamma in B: omega_v(-eta xi) equals the invariant of B_v."""
    x = -eta * xi
    ps = set(primes_of(2 * S.P.D * x)) | {INF}
    return all(hilbert(x, -S.P.D, v) == (-1 if v in S.ramified else 1) for v in ps)


def _unif(L):
    return (L.alpha, L.beta) if L.kind == "split" else L.value


def _chi_p_of_p(L):
    if L.kind == "split":
        return L.alpha * L.beta
    if L.kind == "ramified":
        return L.value ** 2
    return L.value


def local_orbital(S, p, a, eta, xi):
    """Orbital integral at p with chi(eta)^-1 chi(gamma+) removed."""
    P = S.P
    L = P.loc(p)
    cexp = valuation(P.c, p) if P.c % p == 0 else 0
    if cexp:
        if 2 * cexp > valuation(S.e, p):
            raise ValueError("norm inequality ord N(c) <= ord e violated")
        return orbital_core(L.kind, 0, valuation(xi / S.e, p), None, cexp,
                            _index_units(L.kind, p, cexp), valuation(eta, p))
    return orbital_core(L.kind, valuation(eta * a, p), valuation(xi * a / S.e, p), _unif(L))


def orbital_places(S, a, eta, xi):
    return sorted(set(primes_of(a * S.e * S.P.D * S.P.c)) | set(primes_of(eta)) | set(primes_of(xi)))


def linking_closed_form(S, a, eta, xi):
    """Linking number at a nondegenerate class from local orbital products."""
    a = Q(a)
    if not realizable(S, eta, xi):
        return 0j
    out = complex(measure_constants(S)["Z_index"])
    for p in orbital_places(S, a, eta, xi):
        out *= local_orbital(S, p, a, eta, xi)
        if out == 0:
            return 0j
    if S.P.c > 1:
        # chi(eta)^-1 chi(gamma+) reassembled by the product formula: only the part at c survives
        out *= _chi_F(S.P, eta).conjugate()
    return out


def _chi_F(P, x):
    """chi on the ideal x O_E, x a rational prime to c."""
    K = P.K
    x = Q(x)
    n, d = abs(x.numerator), x.denominator
    num = P.chi(Ideal(K, (n, 0, n)))
    den = P.chi(Ideal(K, (d, 0, d)))
    return num * den.conjugate()


def degenerate_linking(S, a, which):
    """Linking number at gamma = 1 (which='1') or gamma = eps (which='eps')."""
    P = S.P
    a = Q(a)
    cst = measure_constants(S)
    const = cst["h_c"] / cst["mu_index"]
    if which == "eps" and not is_norm_type(P.chi):
        return 0j
    out = complex(const)
    if which == "eps":
        out *= P.chi(S.bp)
    for p in sorted(set(primes_of(a * S.e)) | set(primefactors(P.c))):
        L = P.loc(p)
        cexp = valuation(P.c, p) if P.c % p == 0 else 0
        if which == "1":
            core = degenerate_core(L.kind, valuation(a, p), _unif(L), cexp, "1")
        else:
            core = degenerate_core(L.kind, valuation(a / S.e, p), _unif(L), cexp, "eps")
            if core and S.e % p == 0:
                core *= _chi_p_of_p(L) ** valuation(S.e, p)
        out *= core
        if out == 0:
            return 0j
    return out


def pairing_orbital(S, a):
    """<P_{chi,a}, P_chi>_U bucketed by (eta, xi), from local closed forms."""
    a = Q(a)
    out = {}
    if a.denominator != 1 or a <= 0 or gcd(int(a), S.P.c) != 1:
        return out
    A = int(a)
    for k in range(1, A):
        eta = Fraction(k, A)
        v = linking_closed_form(S, a, eta, 1 - eta)
        if v != 0:
            out[(eta, 1 - eta)] = v
    for key, which in (((Fraction(1), Fraction(0)), "1"), ((Fraction(0), Fraction(1)), "eps")):
        v = degenerate_linking(S, a, which)
        if v != 0:
            out[key] = v
    return out


def linking_number(S, a, eta, xi, mode="closed_form"):
    eta, xi = Fraction(eta), Fraction(xi)
    if mode == "direct":
        return pairing_direct(S, a).get((eta, xi), 0j)
    if xi == 0:
        return degenerate_linking(S, a, "1")
    if eta == 0:
        return degenerate_linking(S, a, "eps")
    return linking_closed_form(S, a, eta, xi)


def height_pairing(classes, multiplicity=None):
    """Sum of linking numbers weighted by multiplicity(eta, xi) (default 1)."""
    tot = 0j
    for (eta, xi), v in sorted(classes.items()):
        tot += v * (1 if multiplicity is None else multiplicity(eta, xi))
    return tot


def compare_routes(A, B):
    keys = set(A) | set(B)
    return max((abs(A.get(k, 0) - B.get(k, 0)) for k in keys), default=0.0)


# ---------- generating series ----------

def generating_series_terms(P, a, S=None):
    """Both sides of the generating series at a; the kernel side from the kernel module."""
    from .kernel import kernel_global
    from .special import e_inf
    if P.sign() != 1:
        raise ValueError("generating series needs sign +1")
    S = S or build_algebra(P)
    cst = measure_constants(S)
    a = Q(a)
    B = kernel_global(-a, P)["value"]
    lhs = cst["H_F"] / cst["lambda_U"] * cst["units_index"] * B
    dr = pairing_direct(S, a)
    orb = pairing_orbital(S, a)
    pair = height_pairing(orb)
    rhs = 2 / sqrt(P.D) * pair * e_inf(a)
    return {"lhs": lhs, "rhs": rhs, "pairing": pair, "pairing_direct": height_pairing(dr),
            "route_err": compare_routes(dr, orb), "classes": orb, "constants": cst}


# ---------- derivative side on the auxiliary algebra ----------

def m_a(w, a, eta, xi):
    """Multiplicity m_a(gamma) at an inert place w."""
    if xi != 0:
        k = valuation(xi * a, w)
        return Fraction(k + 1, 2) if k >= 0 and k % 2 else Fraction(0)
    k = valuation(a, w)
    return Fraction(k, 2) if k >= 0 and k % 2 == 0 else Fraction(0)


def M_k(w, k, xi, unit_index=None):
    """Intersection multiplicity on level A_k = O_F + w^k O_E."""
    if k == 0:
        return Fraction(valuation(xi * w, w), 2) if xi != 0 else Fraction(0)
    return Fraction(1, unit_index if unit_index is not None else _index_units("inert", w, k))


def m_bad(w, xi, P):
    """Multiplicity m(gamma) at a nonsplit w dividing d r."""
    if xi == 0 or valuation(xi, w) < 0:
        return Fraction(0)
    if P.r % w == 0:
        return Fraction(valuation(xi / P.r, w) + 1, 2)
    if P.D % w == 0:
        return Fraction(valuation(xi * P.D, w), 2)
    return Fraction(0)


def w_conductor(Bq, g, kmax=20):
    """Least k with w^k O_E inside g R g^-1 (local), i.e. g^-1 (w^k x) g in R for x in O_E."""
    E = Bq.E
    gi = Bq.inv(g)
    for k in range(kmax + 1):
        pk = Fraction(E.p) ** k
        ok = True
        for x in ((pk, 0), (0, pk)):
            h = Bq.mul(Bq.mul(gi, (x, (0, 0))), g)
            if not Bq.in_R(h):
                ok = False
                break
        if ok:
            return k
    raise ValueError("conductor exceeds kmax")


def tau_local(v, eta, xi, P):
    """tau_v with the chi_v(eta) chi_v(gamma+)^-1 factor removed."""
    if v == INF:
        return 1j * float(abs(eta * xi)) ** 0.5
    t = float(absval(eta * xi, v)) ** 0.5
    return t * local_epsilon_omega(v, P.D) if P.D % v == 0 else t


def tau_product(eta, xi, P):
    out = tau_local(INF, eta, xi, P)
    for p in sorted(set(primes_of(eta * xi)) | set(primefactors(P.D))):
        out *= tau_local(p, eta, xi, P)
    return out


def derivative_term_match(P, w, a, S=None):
    """Per-term and aggregate comparison of B^w(a; Phi_r) with the auxiliary-algebra geometry."""
    from .kernel import (enumerate_pairs, kernel_local_deriv, kernel_local_half, pair_places,
                         projection_coeff_finite)
    if P.sign() != -1:
        raise ValueError("derivative kernel requires sign -1")
    S = S or build_algebra(P, base_ramification(P) | {w})
    a = Q(a)
    rows = []
    geo = 0j
    logw = log(float(absval(w, w) ** 2))
    for eta, xi in enumerate_pairs(a, P, "deriv", w=w):
        if not realizable(S, eta, xi):
            raise RuntimeError("pair with Diff = {w} not realized on the auxiliary algebra")
        Ow = local_orbital(S, w, a, eta, xi)
        lhs = kernel_local_deriv(w, a, eta, xi, P)
        rhs = float(absval(a, w)) * tau_local(w, eta, xi, P) * Ow * float(m_a(w, a, eta, xi)) * logw
        comp = 0.0
        Oprod = complex(Ow)
        for v in pair_places(a, eta, xi, P):
            if v == w:
                continue
            Ov = local_orbital(S, v, a, eta, xi)
            Oprod *= Ov
            idx = _index_units(P.K.split_type(v), v, valuation(P.c, v) if P.c % v == 0 else 0)
            L = idx * kernel_local_half(v, a, eta, xi, P)
            R = float(absval(a, v)) * float(P.absd(v)) ** 0.5 * tau_local(v, eta, xi, P) * Ov
            comp = max(comp, abs(L - R))
        geo += float(m_a(w, a, eta, xi)) * Oprod.conjugate()
        rows.append({"eta": eta, "xi": xi, "lhs": lhs, "rhs": rhs, "err": abs(lhs - rhs),
                     "companion_err": comp, "tau_product": tau_product(eta, xi, P)})
    agg_l = float(a) * projection_coeff_finite(w, a, P)["value"]
    agg_r = 2 / sqrt(P.D) * logw * geo
    return {"terms": rows, "aggregate_lhs": agg_l, "aggregate_rhs": agg_r,
            "aggregate_err": abs(agg_l - agg_r)}


def cycle_trace_check(S, samples=()):
    """[V_T : U_T] Q_chi(g) = sum over V/U of P_chi(gh); trivial when U = V."""
    if S.P.c == 1:
        return True
    raise NotImplementedError("trace from U to V needs the level-s order; only c = 1 is supported")
