"""Imaginary quadratic fields: ideals, class groups, ray class groups, Hecke characters."""
from fractions import Fraction
from math import gcd, isqrt
import cmath
import math

from sympy import factorint, primerange, Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_decomp

from .arith import kronecker, is_fundamental, DirichletChar


def _egcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def hnf2(vecs):
    """HNF (A, B, C) of the rank-2 lattice spanned by integer vectors: basis (A,0), (B,C)."""
    rows = [[int(x), int(y)] for x, y in vecs]
    piv = None
    rest = []
    for r in rows:
        if piv is None:
            if r[1] != 0:
                piv = r
            else:
                rest.append(r)
            continue
        # combine r and piv on the y coordinate
        g, u, v = _egcd(piv[1], r[1])
        if g == 0:
            rest.append(r)
            continue
        a, b = piv[1] // g, r[1] // g
        newp = [u * piv[0] + v * r[0], u * piv[1] + v * r[1]]
        other = [b * piv[0] - a * r[0], b * piv[1] - a * r[1]]
        piv = newp
        rest.append(other)
    if piv is None:
        raise ValueError("lattice not of rank 2")
    A = 0
    for r in rest:
        assert r[1] == 0
        A = gcd(A, r[0])
    if A == 0:
        raise ValueError("lattice not of rank 2")
    if piv[1] < 0:
        piv = [-piv[0], -piv[1]]
    return (A, piv[0] % A, piv[1])


class CMField:
    """E = Q(sqrt(-D)), elements as (x, y) meaning x + y*w, w^2 = t*w - n."""

    def __init__(self, D):
        if not is_fundamental(-D):
            raise ValueError("-D must be a fundamental discriminant")
        self.D = D
        self.disc = -D
        self.t = D % 2
        self.n = (self.t + D) // 4
        self.w = {3: 6, 4: 4}.get(D, 2)
        self._units = None
        self._h = None

    def __repr__(self):
        return "CMField(D=%d)" % self.D

    def mul(self, a, b):
        x1, y1 = a
        x2, y2 = b
        return (x1 * x2 - self.n * y1 * y2, x1 * y2 + x2 * y1 + self.t * y1 * y2)

    def conj(self, a):
        return (a[0] + self.t * a[1], -a[1])

    def norm(self, a):
        x, y = a
        return x * x + self.t * x * y + self.n * y * y

    def trace(self, a):
        return 2 * a[0] + self.t * a[1]

    def inv(self, a):
        N = Fraction(self.norm(a))
        c = self.conj(a)
        return (c[0] / N, c[1] / N)

    def to_complex(self, a):
        return complex(a[0]) + complex(a[1]) * complex(self.t / 2, math.sqrt(self.D) / 2)

    def units(self):
        if self._units is None:
            self._units = elements_of_norm_basis(self, (1, 0), (0, 1), 1)
        return self._units

    def omega(self, n):
        return kronecker(self.disc, n)

    def split_type(self, p):
        """'split', 'inert' or 'ramified'."""
        k = kronecker(self.disc, p)
        return {1: "split", -1: "inert", 0: "ramified"}[k]

    def roots_mod(self, p):
        return sorted(r for r in range(p) if (r * r - self.t * r + self.n) % p == 0)

    def primes_above(self, p):
        """Prime ideals above p; for split p the first has HNF (p, -r + w) with r the smaller root."""
        st = self.split_type(p)
        if st == "inert":
            return [Ideal(self, (p, 0, p))]
        rs = self.roots_mod(p)
        out = [Ideal(self, (p, (-r) % p, 1)) for r in rs]
        return out[:1] if st == "ramified" else out

    def ideal(self, *gens):
        vs = []
        for g in gens:
            if isinstance(g, int):
                g = (g, 0)
            vs.append(g)
            vs.append(self.mul(g, (0, 1)))
        return Ideal(self, hnf2(vs))

    def class_number(self):
        if self._h is None:
            self._h = class_number(self.disc)
        return self._h


def elements_of_norm_basis(K, v1, v2, N):
    """All m*v1 + n*v2 with norm N (binary positive form search)."""
    a = K.norm(v1)
    c = K.norm(v2)
    b = K.norm((v1[0] + v2[0], v1[1] + v2[1])) - a - c
    Dl = 4 * a * c - b * b
    out = []
    nmax = isqrt(4 * a * N // Dl) + 1
    for n in range(-nmax, nmax + 1):
        r = 4 * a * N - Dl * n * n
        if r < 0:
            continue
        s = isqrt(r)
        if s * s != r:
            continue
        for sg in ((s, -s) if s else (0,)):
            num = sg - b * n
            if num % (2 * a) == 0:
                m = num // (2 * a)
                out.append((m * v1[0] + n * v2[0], m * v1[1] + n * v2[1]))
    return out


class Ideal:
    """Integral ideal with HNF Z-basis A, B + C*w."""

    def __init__(self, K, abc):
        self.K = K
        self.A, self.B, self.C = abc

    @property
    def basis(self):
        return [(self.A, 0), (self.B, self.C)]

    @property
    def norm(self):
        return self.A * self.C

    def key(self):
        return (self.A, self.B, self.C)

    def __eq__(self, o):
        return self.key() == o.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Ideal[%d, %d+%dw]" % (self.A, self.B, self.C)

    def __mul__(self, o):
        K = self.K
        vs = [K.mul(x, y) for x in self.basis for y in o.basis]
        return Ideal(K, hnf2(vs))

    def conj(self):
        K = self.K
        return Ideal(K, hnf2([K.conj(x) for x in self.basis]))

    def contains(self, a):
        x, y = a
        if y % self.C:
            return False
        k = y // self.C
        return (x - k * self.B) % self.A == 0

    def elements_of_norm(self, N):
        return elements_of_norm_basis(self.K, self.basis[0], self.basis[1], N)

    def generators(self):
        """Generators if principal (all unit multiples), else []."""
        return self.elements_of_norm(self.norm)

    def is_principal(self):
        return bool(self.generators())

    def __pow__(self, k):
        r = Ideal(self.K, (1, 0, 1))
        for _ in range(k):
            r = r * self
        return r


def reduced_forms(disc):
    """Reduced positive definite forms (a,b,c) of discriminant disc < 0 (primitive only)."""
    out = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if c < a:
                continue
            if c == a and b < 0:
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


def class_number(disc):
    return len(reduced_forms(disc))


class QuadOrder:
    def __init__(self, K, c):
        if c < 1:
            raise ValueError("conductor must be positive")
        self.K = K
        self.c = c

    @property
    def disc(self):
        return self.K.disc * self.c * self.c


def class_group(order):
    """Pic(O_c) as the list of reduced forms of discriminant -D c^2."""
    forms = reduced_forms(order.disc)
    return {"order": len(forms), "forms": forms}


def unit_group_mod_size(p, k, st):
    if st == "split":
        return (p - 1) ** 2 * p ** (2 * (k - 1))
    if st == "inert":
        return (p * p - 1) * p ** (2 * (k - 1))
    return p * (p - 1) * p ** (2 * (k - 1))


def residue_units_order(K, c):
    r = 1
    for p, k in factorint(c).items():
        r *= unit_group_mod_size(p, k, K.split_type(p))
    return r


def congruent(a, b, c):
    return (a[0] - b[0]) % c == 0 and (a[1] - b[1]) % c == 0


class RayClassGroup:
    """Ideals prime to c modulo principal ideals (b) with b = 1 mod cO_E."""

    def __init__(self, K, c=1, norm_bound=None, stop_early=True):
        if gcd(c, K.D) != 1:
            raise ValueError("modulus violates hypothesis: c must be prime to D")
        self.K = K
        self.c = c
        ok = [u for u in K.units() if congruent(u, (1, 0), c)]
        self.unit_image = len(K.units()) // len(ok)
        self.expected_order = K.class_number() * residue_units_order(K, c) // self.unit_image
        self.reps = []
        self.gens = []
        bound = norm_bound or max(200, 40 * self.expected_order)
        for p in primerange(2, bound + 1):
            if c % p == 0:
                continue
            for P in K.primes_above(p):
                if P.norm > bound:
                    continue
                if self._lookup(P) is None:
                    self.reps.append(P)
            if stop_early and len(self.reps) >= self.expected_order:
                break
        self._build_structure()

    def equivalent(self, a, b):
        J = a * b.conj()
        Nb = b.norm
        for g in J.generators():
            if congruent(g, (Nb, 0), self.c):
                return True
        return False

    def _lookup(self, I):
        for i, R in enumerate(self.reps):
            if self.equivalent(I, R):
                return i
        return None

    def class_of(self, I):
        if gcd(I.norm, self.c) != 1:
            raise ValueError("ideal not prime to modulus")
        i = self._lookup(I)
        if i is None:
            raise RuntimeError("class not found; enlarge norm bound")
        return i

    @property
    def order(self):
        return len(self.reps)

    def identity(self):
        return self.class_of(Ideal(self.K, (1, 0, 1)))

    def _build_structure(self):
        h = len(self.reps)
        e0 = self.identity()
        # greedy generating set: add a rep whenever it escapes the current subgroup
        gens = []
        reached = {e0}
        for i in range(h):
            if i in reached:
                continue
            gens.append(i)
            frontier = list(reached)
            while frontier:
                x = frontier.pop()
                for g in gens:
                    y = self.class_of(self.reps[x] * self.reps[g])
                    if y not in reached:
                        reached.add(y)
                        frontier.append(y)
        k = len(gens)
        vec = {e0: [0] * k}
        rels = []
        queue = [e0]
        self.table_gen = {}
        while queue:
            i = queue.pop(0)
            for gi, g in enumerate(gens):
                j = self.class_of(self.reps[i] * self.reps[g])
                self.table_gen[(i, gi)] = j
                v = list(vec[i])
                v[gi] += 1
                if j not in vec:
                    vec[j] = v
                    queue.append(j)
                else:
                    rels.append([a - b for a, b in zip(v, vec[j])])
        while len(rels) < k:
            rels.append([0] * k)
        M = Matrix(rels)
        S, U, V = smith_normal_decomp(M, domain=ZZ)
        d = [abs(int(S[i, i])) for i in range(k)]
        keep = [i for i in range(k) if d[i] != 1]
        self.invariants = [d[i] for i in keep]
        Vl = [[int(V[r, c]) for c in range(k)] for r in range(k)]
        self.coords = {}
        for i, v in vec.items():
            y = [sum(v[r] * Vl[r][c] for r in range(k)) for c in range(k)]
            self.coords[i] = tuple(y[c] % d[c] if d[c] else y[c] for c in keep)
        self._coord_index = {v: i for i, v in self.coords.items()}

    def mul(self, i, j):
        a, b = self.coords[i], self.coords[j]
        return self._coord_index[tuple((x + y) % n for x, y, n in zip(a, b, self.invariants))]

    def inverse(self, i):
        return self._coord_index[tuple((-x) % n for x, n in zip(self.coords[i], self.invariants))]

    def structure(self):
        return list(self.invariants)


def ray_class_group(K, c=1):
    return RayClassGroup(K, c)


class HeckeCharacter:
    """Finite order character of a ray class group: generator i maps to exp(2 pi i k_i / n_i)."""

    def __init__(self, G, ks=None):
        self.G = G
        self.K = G.K
        self.c = G.c
        ks = list(ks or [0] * len(G.invariants))
        if len(ks) != len(G.invariants):
            raise ValueError("need one exponent per invariant factor %s" % (G.invariants,))
        self.ks = ks

    def on_class(self, i):
        co = self.G.coords[i]
        ph = sum(Fraction(k * x, n) for k, x, n in zip(self.ks, co, self.G.invariants))
        ph -= math.floor(ph)
        if ph == 0:
            return 1 + 0j
        return cmath.exp(2j * math.pi * float(ph))

    def __call__(self, I):
        if gcd(I.norm, self.c) != 1:
            return 0j
        return self.on_class(self.G.class_of(I))

    def conjugate(self):
        return HeckeCharacter(self.G, [(-k) % n for k, n in zip(self.ks, self.G.invariants)])

    def is_trivial(self):
        return all(k % n == 0 for k, n in zip(self.ks, self.G.invariants))

    def order(self):
        o = 1
        for k, n in zip(self.ks, self.G.invariants):
            o = o * (n // gcd(k, n)) // gcd(o, n // gcd(k, n))
        return o

    def values_on_reps(self):
        return [self.on_class(i) for i in range(self.G.order)]

    def __repr__(self):
        return "HeckeCharacter(D=%d, c=%d, ks=%s)" % (self.K.D, self.c, self.ks)


def chi_star(chi):
    """chi composed with complex conjugation, as a value function on ideals."""
    return lambda I: chi(I.conj())


def is_norm_type(chi, tol=1e-9):
    G = chi.G
    for i, R in enumerate(G.reps):
        if abs(chi(R.conj()) - chi.on_class(i)) > tol:
            return False
    return True


def restrict_to_base(chi):
    """chi_0 as a Dirichlet character mod c with its conductor."""
    c = chi.c
    K = chi.K
    vals = {}
    for x in range(1, c + 1):
        if gcd(x, c) == 1:
            vals[x % c] = chi(Ideal(K, (x, 0, x)))
    chi0 = DirichletChar(c, lambda n: vals[n % c])
    cond = c
    for f in sorted(d for d in range(1, c + 1) if c % d == 0):
        if all(abs(vals[x] - vals[y]) < 1e-9 for x in vals for y in vals if (x - y) % f == 0):
            cond = f
            break
    assert c % cond == 0
    return chi0, cond


class LocalData:
    """Local components of chi at a rational prime."""

    def __init__(self, p, kind, alpha=None, beta=None, value=None, ramified=False):
        self.p = p
        self.kind = kind
        self.alpha = alpha
        self.beta = beta
        self.value = value
        self.ramified = ramified

    def __repr__(self):
        return "LocalData(p=%d, %s, a=%s, b=%s, v=%s, ram=%s)" % (
            self.p, self.kind, self.alpha, self.beta, self.value, self.ramified)


def chi_local(chi, p):
    K = chi.K
    st = K.split_type(p)
    if chi.c % p == 0:
        return LocalData(p, st, 0, 0, 0, ramified=True)
    Ps = K.primes_above(p)
    if st == "split":
        return LocalData(p, st, alpha=chi(Ps[0]), beta=chi(Ps[1]))
    return LocalData(p, st, value=chi(Ps[0]))


def ideal_coeff(chi_loc_fn, n):
    """sum over ideals of norm n of chi, from local data (multiplicative)."""
    r = 1 + 0j
    for p, k in factorint(n).items():
        L = chi_loc_fn(p)
        if L.ramified:
            return 0j
        if L.kind == "split":
            r *= sum(L.alpha ** i * L.beta ** (k - i) for i in range(k + 1))
        elif L.kind == "inert":
            if k % 2:
                return 0j
            r *= L.value ** (k // 2)
        else:
            r *= L.value ** k
    return r
