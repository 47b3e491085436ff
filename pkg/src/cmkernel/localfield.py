"""Local arithmetic of E_p and B_p = E_p + E_p eps; orbital integrals in closed form and by brute force."""
from fractions import Fraction
import cmath
import math

from .arith import valuation


def _ord(x, p):
    return valuation(x, p) if x != 0 else 10 ** 9


def residue(x, p, N):
    """x in Z_(p) reduced mod p^N."""
    x = Fraction(x)
    m = p ** N
    if x.denominator % p == 0:
        raise ValueError("not p-integral")
    return x.numerator * pow(x.denominator, -1, m) % m


def hensel_root(K, r, p, N):
    """Lift a simple root r of w^2 - t w + n mod p to Z/p^N."""
    m = p
    x = r
    for _ in range(N + 2):
        m = min(m * m, p ** N)
        f = x * x - K.t * x + K.n
        df = 2 * x - K.t
        x = (x - f * pow(df, -1, m)) % m
        if m == p ** N:
            break
    assert (x * x - K.t * x + K.n) % p ** N == 0
    return x


class LocalE:
    """E_p for a rational prime p; elements are global pairs (x, y) = x + y w with Fraction entries."""

    PREC = 80

    def __init__(self, K, p):
        self.K = K
        self.p = p
        self.kind = K.split_type(p)
        if self.kind == "split":
            r1, r2 = K.roots_mod(p)
            self.R = (hensel_root(K, r1, p, self.PREC), hensel_root(K, r2, p, self.PREC))
            R1 = self.R[0] % p ** 2
            self.pi1 = (Fraction(-(R1 + p)), Fraction(1))
            self.pi2 = K.conj(self.pi1)
            assert self.val(self.pi1) == (1, 0) and self.val(self.pi2) == (0, 1)
        elif self.kind == "ramified":
            for r in K.roots_mod(p) + [K.roots_mod(p)[0] + p]:
                pi = (Fraction(-r), Fraction(1))
                if valuation(K.norm(pi), p) == 1:
                    self.pi = pi
                    break
            else:
                raise RuntimeError("no uniformizer found")
        else:
            self.pi = (Fraction(p), Fraction(0))

    # arithmetic
    def mul(self, a, b):
        return self.K.mul(a, b)

    def conj(self, a):
        return self.K.conj(a)

    def norm(self, a):
        return Fraction(self.K.norm(a))

    def inv(self, a):
        return self.K.inv(a)

    def pw(self, a, k):
        r = (Fraction(1), Fraction(0))
        b = a if k >= 0 else self.inv(a)
        for _ in range(abs(k)):
            r = self.mul(r, b)
        return r

    def sigma(self, a, i):
        """Image in Q_p (split case) as (valuation, unit residue mod p^PREC-ish)."""
        p = self.p
        x, y = Fraction(a[0]), Fraction(a[1])
        if x == 0 and y == 0:
            return (10 ** 9, 0)
        k = min(_ord(x, p), _ord(y, p))
        x, y = x / Fraction(p) ** k, y / Fraction(p) ** k
        m = p ** self.PREC
        z = (residue(x, p, self.PREC) + residue(y, p, self.PREC) * self.R[i]) % m
        if z == 0:
            raise ArithmeticError("p-adic precision exhausted")
        j = 0
        while z % p == 0:
            z //= p
            j += 1
        return (k + j, z)

    def val(self, a):
        """Valuation data: int for inert/ramified (ord_P), pair for split."""
        p = self.p
        if self.kind == "split":
            return (self.sigma(a, 0)[0], self.sigma(a, 1)[0])
        if a[0] == 0 and a[1] == 0:
            return 10 ** 9
        if self.kind == "inert":
            return min(_ord(Fraction(a[0]), p), _ord(Fraction(a[1]), p))
        return valuation(self.norm(a), p)

    def integral(self, a):
        v = self.val(a)
        return min(v) >= 0 if self.kind == "split" else v >= 0

    def unit_part(self, a):
        """a divided by the standard uniformizer powers."""
        v = self.val(a)
        if self.kind == "split":
            return self.mul(a, self.mul(self.pw(self.pi1, -v[0]), self.pw(self.pi2, -v[1])))
        if self.kind == "inert":
            return (Fraction(a[0]) / self.p ** v, Fraction(a[1]) / self.p ** v)
        return self.mul(a, self.pw(self.pi, -v))

    def unit_residue(self, a, n):
        """(x mod p^n, y mod p^n) of an integral element."""
        return (residue(a[0], self.p, n), residue(a[1], self.p, n))

    def cong_one(self, a, n):
        """a = 1 mod p^n O_E (a integral)."""
        x, y = self.unit_residue(a, n)
        return x == 1 % self.p ** n and y == 0

    def unit_reps(self, n):
        """All residues x + y w mod p^n that are units."""
        m = self.p ** n
        out = []
        for x in range(m):
            for y in range(m):
                if self.K.norm((x, y)) % self.p:
                    out.append((Fraction(x), Fraction(y)))
        return out

    def torus_reps_mod_F(self, n):
        """Representatives of O_E^x / (Z_p^x (1 + p^n O_E))."""
        if n == 0:
            return [(Fraction(1), Fraction(0))]
        p, m = self.p, self.p ** n
        if self.kind == "split":
            out = []
            d = (self.R[0] - self.R[1]) % m
            for g in range(1, m):
                if g % p == 0:
                    continue
                y = (g - 1) * pow(d, -1, m) % m
                x = (1 - y * self.R[1]) % m
                out.append((Fraction(x), Fraction(y)))
            return out
        # inert: quotient of (O/p^n)^x by (Z/p^n)^x; pick one rep per orbit
        seen = set()
        out = []
        for a in self.unit_reps(n):
            key = self.unit_residue(a, n)
            if key in seen:
                continue
            orbit = set()
            for c in range(1, m):
                if c % p:
                    orbit.add(((key[0] * c) % m, (key[1] * c) % m))
            seen |= orbit
            out.append(a)
        return out


class LocalChar:
    """Character of E_p^x: uniformizer values plus a character on (O_E/p^n)^x.

    inert: unif = chi(p); ramified: unif = chi(pi); split: unif = (chi(pi1), chi(pi2)).
    unit_fn takes the residue pair (x mod p^n, y mod p^n).
    """

    def __init__(self, E, unif, n=0, unit_fn=None):
        self.E = E
        self.unif = unif
        self.n = n
        self.unit_fn = unit_fn

    def unit_value(self, u):
        if self.n == 0 or self.unit_fn is None:
            return 1
        return self.unit_fn(self.E.unit_residue(u, self.n))

    def __call__(self, a):
        E = self.E
        v = E.val(a)
        if E.kind == "split":
            base = self.unif[0] ** v[0] * self.unif[1] ** v[1]
        else:
            base = self.unif ** v
        return base * self.unit_value(E.unit_part(a))

    def on_F(self, x):
        return self((Fraction(x), Fraction(0)))

    @property
    def ramified(self):
        return self.n > 0 and self.unit_fn is not None

    def alpha_beta(self):
        return self.unif


def cubic_unit_char(E, n=1):
    """A cubic character of (O_E/p)^x (split: through sigma_1; inert: discrete log in F_{p^2})."""
    p = E.p
    w3 = cmath.exp(2j * math.pi / 3)
    if E.kind == "split":
        if (p - 1) % 3:
            raise ValueError("need p = 1 mod 3 for a cubic character of F_p^x")
        g = _prim_root(p)
        dlog = {pow(g, k, p): k for k in range(p - 1)}
        R = E.R[0] % p
        return lambda res: w3 ** (dlog[(res[0] + res[1] * R) % p] % 3)
    # inert: F_{p^2} = F_p[w]
    K = E.K
    elts = [(x, y) for x in range(p) for y in range(p) if (x, y) != (0, 0)]

    def mulp(a, b):
        c = K.mul(a, b)
        return (c[0] % p, c[1] % p)

    order = p * p - 1
    for g in elts:
        x = (1, 0)
        seen = {}
        for k in range(order):
            seen[x] = k
            x = mulp(x, g)
        if len(seen) == order:
            break
    return lambda res: w3 ** (seen[(res[0] % p, res[1] % p)] % 3)


def _prim_root(p):
    from sympy import primitive_root
    return int(primitive_root(p))


class LocalQuat:
    """B_p = E_p + E_p eps with eps^2 = -e, eps t = conj(t) eps; elements are pairs (u, v)."""

    def __init__(self, E, e):
        self.E = E
        self.e = Fraction(e)

    def mul(self, g, h):
        E = self.E
        u1, v1 = g
        u2, v2 = h
        a = E.mul(u1, u2)
        b = E.mul(v1, E.conj(v2))
        c = E.mul(u1, v2)
        d = E.mul(v1, E.conj(u2))
        return ((a[0] - self.e * b[0], a[1] - self.e * b[1]), (c[0] + d[0], c[1] + d[1]))

    def norm(self, g):
        return self.E.norm(g[0]) + self.e * self.E.norm(g[1])

    def conj(self, g):
        E = self.E
        u, v = g
        return (E.conj(u), (-v[0], -v[1]))

    def inv(self, g):
        N = self.norm(g)
        c = self.conj(g)
        return ((c[0][0] / N, c[0][1] / N), (c[1][0] / N, c[1][1] / N))

    def conj_by_torus(self, g, t):
        """t^{-1} g t = u + t^{-1} v conj(t) eps."""
        E = self.E
        u, v = g
        return (u, E.mul(E.mul(E.inv(t), v), E.conj(t)))

    def in_R(self, g):
        return self.E.integral(g[0]) and self.E.integral(g[1])

    def eta_xi(self, g):
        N = self.norm(g)
        return self.E.norm(g[0]) / N, self.e * self.E.norm(g[1]) / N


# ---------- closed forms ----------

def _ab_sum(al, be, k):
    if k < 0:
        return 0
    return sum((al ** i if i else 1) * (be ** (k - i) if k - i else 1) for i in range(k + 1))


def orbital_core(kind, ka, kx, unif, c_exp=0, idx=1, keta=0):
    """Orbital integral with the chi(eta)^-1 chi(gamma+) factor removed.

    ka = ord(eta a), kx = ord(xi a / e) for p not dividing c; for p | c, keta = ord(eta) and kx = ord(xi / e).
    unif: chi(p) (inert), chi(pi) (ramified) or (alpha, beta) (split).
    """
    if c_exp > 0:
        if keta != 0 or kx < 0:
            return 0
        if kind == "inert":
            return idx if kx % 2 == 0 else 0
        if kind == "split":
            return idx * (1 + kx)
        raise ValueError("p | c cannot be ramified in E")
    if ka < 0 or kx < 0:
        return 0
    if kind == "inert":
        if ka % 2 or kx % 2:
            return 0
        return unif ** (ka // 2)
    if kind == "ramified":
        return 2 * unif ** ka
    return (1 + kx) * _ab_sum(unif[0], unif[1], ka)


def degenerate_core(kind, k, unif, c_exp=0, which="1"):
    """P(1) (k = ord a) or P(eps) without the chi(e) factor (k = ord(a/e))."""
    if c_exp > 0:
        return 1 if which == "1" else 0
    if k < 0:
        return 0
    if kind == "inert":
        return unif ** (k // 2) if k % 2 == 0 else 0
    if kind == "ramified":
        return unif ** k
    return _ab_sum(unif[0], unif[1], k)


def orbital_closed_form(Bq, g, a, chi, c_exp=0):
    """Closed-form orbital integral of P_{chi,a,p} at a nondegenerate g = (u, v)."""
    E = Bq.E
    p = E.p
    u, v = g
    if u == (0, 0) or v == (0, 0):
        raise ValueError("degenerate gamma: use degenerate values")
    eta, xi = Bq.eta_xi(g)
    if c_exp > 0:
        if 2 * c_exp > valuation(Bq.e, p):
            raise ValueError("norm inequality ord N(c) <= ord e violated")
        core = orbital_core(E.kind, 0, valuation(xi / Bq.e, p), chi.unif, c_exp,
                            index_units(E, c_exp), valuation(eta, p))
        return core * chi(u) if core else 0
    core = orbital_core(E.kind, valuation(eta * a, p), valuation(xi * a / Bq.e, p), chi.unif)
    return core * chi.on_F(eta).conjugate() * chi(u) if core else 0


def index_units(E, n):
    """[O_E^x : Z_p^x (1 + p^n O_E)]."""
    return _index_units(E.kind, E.p, n)


def _index_units(kind, p, n):
    if n == 0:
        return 1
    if kind == "split":
        return (p - 1) * p ** (n - 1)
    if kind == "inert":
        return (p + 1) * p ** (n - 1)
    return p ** n


def degenerate_closed_form(Bq, which, a, chi, c_exp=0):
    """P_{chi,a,p}(1) or P_{chi,a,p}(eps)."""
    p = Bq.E.p
    if which == "1":
        return degenerate_core(Bq.E.kind, valuation(a, p), chi.unif, c_exp, "1")
    core = degenerate_core(Bq.E.kind, valuation(Fraction(a) / Bq.e, p), chi.unif, c_exp, "eps")
    return chi.on_F(Bq.e) * core if core else 0


# ---------- brute force ----------

class BruteOrbital:
    """Direct evaluation of sum_t P(t^{-1} g t), P(g) = sum_s chi(s) 1_H(g^{-1} s).

    Integrality of the two E_p components is tested through their valuations, which are additive;
    exact residues are only formed for the congruence condition at p | c.
    """

    def __init__(self, Bq, a, chi, c_exp=0, window=8):
        self.Bq = Bq
        self.E = Bq.E
        self.a = Fraction(a)
        self.chi = chi
        self.n = c_exp
        self.K = window
        E = self.E
        one = (Fraction(1), Fraction(0))
        self.unit_s = E.unit_reps(c_exp) if c_exp else [one]
        self.t_units = E.torus_reps_mod_F(c_exp) if c_exp else [one]
        self._s_cache = {}
        self.zero = (0, 0) if E.kind == "split" else 0

    def _add(self, x, y, sgn=1):
        if self.E.kind == "split":
            return (x[0] + sgn * y[0], x[1] + sgn * y[1])
        return x + sgn * y

    def _swap(self, x):
        return (x[1], x[0]) if self.E.kind == "split" else x

    def _nonneg(self, x):
        return min(x) >= 0 if self.E.kind == "split" else x >= 0

    def s_list(self, target):
        """(s, val(s), chi(s)) with ord N(s) = target."""
        if target in self._s_cache:
            return self._s_cache[target]
        E = self.E
        if E.kind == "inert":
            bases = [(E.pw(E.pi, target // 2), target // 2)] if target % 2 == 0 else []
        elif E.kind == "ramified":
            bases = [(E.pw(E.pi, target), target)]
        else:
            bases = [(E.mul(E.pw(E.pi1, i), E.pw(E.pi2, target - i)), (i, target - i))
                     for i in range(-self.K, self.K + target + 1)]
        out = []
        for b, vb in bases:
            for u in self.unit_s:
                s = E.mul(b, u)
                out.append((s, vb, self.chi(s)))
        self._s_cache[target] = out
        return out

    def _P(self, u, v, vv, hits=None):
        """P at g = u + v eps where vv = val(v) (None if v = 0)."""
        Bq, E, p = self.Bq, self.E, self.E.p
        Ng = Bq.E.norm(u) + Bq.e * Bq.E.norm(v) if vv is not None else E.norm(u)
        kN = valuation(Ng, p)
        target = valuation(self.a, p) + kN
        vN = (kN, kN) if E.kind == "split" else (kN if E.kind == "inert" else 2 * kN)
        vub = self._swap(E.val(u)) if u != (0, 0) else None
        tot = 0
        for s, vs, cs in self.s_list(target):
            # g^{-1} s = (conj(u) s - v conj(s) eps) / N(g)
            if vub is not None and not self._nonneg(self._add(self._add(vub, vs), vN, -1)):
                continue
            if vv is not None and not self._nonneg(self._add(self._add(vv, self._swap(vs)), vN, -1)):
                continue
            if self.n:
                if vub is None:
                    continue
                h0 = E.mul(E.conj(u), s)
                h0 = (h0[0] / Ng, h0[1] / Ng)
                if not E.cong_one(h0, self.n):
                    continue
            tot += cs
            if hits is not None:
                hits.append(vs)
        return tot

    def P(self, g):
        u, v = g
        vv = self.E.val(v) if v != (0, 0) else None
        return self._P(u, v, vv)

    def t_list(self):
        E = self.E
        if E.kind == "inert":
            bases = [((Fraction(1), Fraction(0)), 0)]
        elif E.kind == "ramified":
            bases = [((Fraction(1), Fraction(0)), 0), (E.pi, 1)]
        else:
            bases = [(E.pw(E.pi1, k), (k, 0)) for k in range(-self.K, self.K + 1)]
        return [(E.mul(b, u), vb) for b, vb in bases for u in self.t_units]

    def orbital(self, g):
        E, Bq = self.E, self.Bq
        u, v = g
        vv = E.val(v)
        tot = 0
        edge = False
        for t, vt in self.t_list():
            # t^{-1} v conj(t): valuation shifts by val(conj t) - val(t)
            vv2 = self._add(self._add(vv, self._swap(vt)), vt, -1)
            v2 = Bq.conj_by_torus(g, t)[1] if self.n else v
            hits = []
            tot += self._P(u, v2, vv2, hits)
            if E.kind == "split" and hits:
                if abs(vt[0]) >= self.K or any(max(abs(x[0]), abs(x[1])) >= self.K for x in hits):
                    edge = True
        if edge:
            raise RuntimeError("window too small: boundary term nonzero; increase K")
        return tot

    def degenerate(self, which):
        one = (Fraction(1), Fraction(0))
        zero = (Fraction(0), Fraction(0))
        if which == "1":
            return self._P(one, zero, None)
        return self._P(zero, one, self.zero)
