"""Exact rational arithmetic: valuations, quadratic symbols, Gauss sums, Bernoulli L(0)."""
from fractions import Fraction
from functools import lru_cache
import cmath
import math

INF = "inf"


def Q(x, d=1):
    if isinstance(x, Fraction) and d == 1:
        return x
    return Fraction(x, d)


def valuation(x, p):
    x = Q(x)
    if x == 0:
        raise ValueError("valuation of zero undefined")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def absval(x, p):
    """|x|_p normalized; p = INF gives the real absolute value."""
    x = Q(x)
    if p == INF:
        return abs(x)
    if x == 0:
        return Fraction(0)
    return Fraction(1, p) ** valuation(x, p)


def unit_part(x, p):
    x = Q(x)
    return x / Fraction(p) ** valuation(x, p)


def primes_of(x):
    """Primes dividing numerator or denominator of a nonzero rational."""
    from sympy import primefactors
    x = Q(x)
    return sorted(set(primefactors(abs(x.numerator))) | set(primefactors(x.denominator)))


def _jacobi(a, n):
    # n odd positive
    a %= n
    t = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def kronecker(a, n):
    a, n = int(a), int(n)
    if n == 0:
        return 1 if abs(a) == 1 else 0
    t = 1
    if n < 0:
        n = -n
        if a < 0:
            t = -t
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    if e:
        if a % 2 == 0:
            return 0
        if e % 2 and a % 8 in (3, 5):
            t = -t
    if n == 1:
        return t
    return t * _jacobi(a, n)


def _square_free_int(x):
    # multiply a rational by the square of its denominator
    x = Q(x)
    return x.numerator * x.denominator


@lru_cache(maxsize=None)
def _hilbert_int(a, b, p):
    if p == INF:
        return -1 if (a < 0 and b < 0) else 1
    al = valuation(a, p)
    be = valuation(b, p)
    u = a // p ** al
    v = b // p ** be
    if p != 2:
        s = (-1) ** (al * be * ((p - 1) // 2) % 2)
        if be % 2:
            s *= _jacobi(u, p)
        if al % 2:
            s *= _jacobi(v, p)
        return s
    eps = lambda x: ((x - 1) // 2) % 2
    om = lambda x: ((x * x - 1) // 8) % 2
    e = eps(u % 8) * eps(v % 8) + al * om(v % 8) + be * om(u % 8)
    return -1 if e % 2 else 1


def hilbert(a, b, p):
    """Local Hilbert symbol (a,b)_p with p a prime or INF."""
    if Q(a) == 0 or Q(b) == 0:
        raise ValueError("hilbert symbol of zero")
    return _hilbert_int(_square_free_int(a), _square_free_int(b), p)


def omega_local(x, D, p):
    """omega_p(x) for the quadratic character of Q(sqrt(-D))."""
    return hilbert(x, -D, p)


def omega(n, D):
    """Global quadratic character on integers prime to D: kronecker(-D, n)."""
    return kronecker(-D, n)


def cond_exponent(p, D):
    """Exponent of p in the conductor of omega (= ord_p of disc)."""
    return valuation(D, p)


@lru_cache(maxsize=None)
def local_epsilon_omega(p, D):
    """eps_p(1/2, omega_p, psi_p) as a normalized Gauss sum; i at the real place."""
    if p == INF:
        return 1j
    if D % p:
        raise ValueError("omega unramified at p, epsilon factor is 1; use trivial branch")
    f = cond_exponent(p, D)
    q = p ** f
    tot = 0j
    for u in range(1, q):
        if u % p == 0:
            continue
        tot += omega_local(Fraction(u, q), D, p) * cmath.exp(-2j * math.pi * u / q)
    return tot / math.sqrt(q)


def is_fundamental(disc):
    """disc < 0 a fundamental discriminant."""
    from sympy import factorint
    if disc % 4 == 1:
        return all(e == 1 for e in factorint(-disc).values())
    if disc % 4 == 0:
        m = disc // 4
        if m % 4 not in (2, 3):
            return False
        return all(e == 1 for e in factorint(-m).values())
    return False


def fundamental_Ds(bound):
    return [D for D in range(3, bound) if is_fundamental(-D)]


class DirichletChar:
    """Dirichlet character mod m given by a value function."""

    def __init__(self, m, f):
        self.m = m
        self.f = f

    def __call__(self, n):
        if math.gcd(n, self.m) != 1:
            return 0
        return self.f(n % self.m)


def quadratic_char(D):
    return DirichletChar(D, lambda n: kronecker(-D, n))


def generalized_bernoulli_L0(chi, exact=True):
    """L(0, chi) = -B_{1,chi}; chi odd primitive. Rational when chi is real."""
    m = chi.m
    if m > 1 and abs(chi(m - 1) + 1) > 1e-12:
        raise ValueError("L(0)=0 forced by functional equation (chi even)")
    vals = [chi(a) for a in range(1, m + 1)]
    if exact and all(isinstance(v, int) for v in vals):
        return -Fraction(sum(a * v for a, v in zip(range(1, m + 1), vals)), m)
    return -sum(a * v for a, v in zip(range(1, m + 1), vals)) / m
