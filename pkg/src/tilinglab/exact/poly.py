"""Integer polynomials with exact factorization and real root isolation.

Everything here is exact: coefficients are Python ints, intermediate
arithmetic uses Fraction. Degrees are small (at most 8 in this library),
so factorization uses square-free decomposition, rational root stripping
and a Kronecker-style interpolation search, and real roots are isolated
with Sturm sequences on rational intervals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt


class FactorBudgetExceeded(RuntimeError):
    """Raised when the divisor search in Kronecker factorization explodes."""


def _strip(coeffs):
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial, coefficients ascending by degree."""

    coeffs: tuple

    @staticmethod
    def of(*coeffs):
        return IntPolynomial(_strip(int(c) for c in coeffs))

    @staticmethod
    def from_coeffs(seq):
        return IntPolynomial(_strip(int(c) for c in seq))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, (int, Fraction)) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(_strip(out))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return IntPolynomial(())
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(_strip(out))

    __rmul__ = __mul__

    def __pow__(self, k):
        result = IntPolynomial.of(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self):
        return IntPolynomial(_strip(i * c for i, c in enumerate(self.coeffs) if i))

    def content(self):
        g = 0
        for c in self.coeffs:
            g = gcd(g, abs(c))
        return g

    def primitive(self):
        """Primitive part with positive leading coefficient."""
        if self.is_zero:
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntPolynomial(tuple(c // g for c in self.coeffs))

    def reversal(self):
        """x^deg * p(1/x); valid view of reciprocal roots when p(0) != 0."""
        return IntPolynomial(_strip(reversed(self.coeffs)))

    def is_palindromic(self):
        return not self.is_zero and self.coeffs == tuple(reversed(self.coeffs))

    def shift_scale(self, num, den):
        """Integer polynomial den^deg * p(num/den * x), for rational radius tricks."""
        d = self.degree
        out = [c * num**i * den ** (d - i) for i, c in enumerate(self.coeffs)]
        return IntPolynomial(_strip(out))

    def fraction_coeffs(self):
        return tuple(Fraction(c) for c in self.coeffs)

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                term = str(abs(c))
            else:
                xs = "x" if i == 1 else f"x^{i}"
                term = xs if abs(c) == 1 else f"{abs(c)}*{xs}"
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append(("- " if c < 0 else "+ ") + term)
        return " ".join(parts)


X = IntPolynomial.of(0, 1)


# ---------------------------------------------------------------------------
# rational-coefficient helpers (tuples of Fractions, ascending)

def _q_strip(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _q_divmod(a, b):
    """Euclidean division of Fraction coefficient lists."""
    a = list(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        coef = a[-1] * inv
        q[shift] = coef
        for i, bc in enumerate(b):
            a[shift + i] -= coef * bc
        a.pop()
    return _q_strip(q), _q_strip(a)


def poly_gcd(p, q):
    """Primitive gcd over the rationals, returned as an IntPolynomial."""
    a = list(p.fraction_coeffs())
    b = list(q.fraction_coeffs())
    while b:
        _, r = _q_divmod(a, b)
        a, b = b, r
    if not a:
        return IntPolynomial(())
    den = 1
    for c in a:
        den = den * c.denominator // gcd(den, c.denominator)
    return IntPolynomial.from_coeffs(c * den for c in a).primitive()


def poly_div_exact(p, q):
    """p // q when q divides p over the rationals; raises otherwise."""
    quo, rem = _q_divmod(list(p.fraction_coeffs()), list(q.fraction_coeffs()))
    if rem:
        raise ValueError("polynomial division is not exact")
    if any(c.denominator != 1 for c in quo):
        raise ValueError("quotient is not integral")
    return IntPolynomial.from_coeffs(int(c) for c in quo)


def squarefree_decomposition(p):
    """Yun's algorithm: list of (squarefree factor, multiplicity)."""
    p = p.primitive()
    out = []
    d = p.derivative()
    a = poly_gcd(p, d)
    b = poly_div_exact(p, a)
    k = 1
    while b.degree > 0:
        g = poly_gcd(a, b)
        part = poly_div_exact(b, g)
        if part.degree > 0:
            out.append((part, k))
        a = poly_div_exact(a, g)
        b = g
        k += 1
    return out


def _divisors(n):
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _rational_roots(p):
    """All rational roots of a primitive integer polynomial."""
    if p.is_zero or p.degree == 0:
        return []
    roots = []
    a0, ad = p.coeffs[0], p.leading
    if a0 == 0:
        return [Fraction(0)]
    for num in _divisors(a0):
        for den in _divisors(ad):
            for s in (1, -1):
                r = Fraction(s * num, den)
                if p(r) == 0:
                    roots.append(r)
    return sorted(set(roots))


def _interpolate(points, values):
    """Lagrange interpolation, Fraction coefficient list (ascending)."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        # basis polynomial for points[i]
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            # basis *= (x - points[j])
            new = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                new[k] -= c * points[j]
                new[k + 1] += c
            basis = new
            denom *= points[i] - points[j]
        scale = Fraction(values[i]) / denom
        for k, c in enumerate(basis):
            coeffs[k] += c * scale
    return _q_strip(coeffs)


_KRONECKER_CAP = 2_000_000


def _kronecker_factor(p):
    """One nontrivial factor of a primitive squarefree p with no rational
    roots, or None if p is irreducible. Degree must be small."""
    n = p.degree
    if n <= 3:
        return None  # no rational roots and degree <= 3 means irreducible
    # candidate evaluation points ordered by |p(x)| to keep divisor sets small
    candidates = sorted(range(-8, 9), key=lambda x: (abs(p(x)), abs(x)))
    for d in range(2, n // 2 + 1):
        pts = candidates[: d + 1]
        value_divs = []
        total = 1
        for x in pts:
            v = p(x)
            divs = _divisors(v)
            signed = [s * t for t in divs for s in (1, -1)]
            value_divs.append(signed)
            total *= len(signed)
            if total > _KRONECKER_CAP:
                raise FactorBudgetExceeded(
                    f"divisor search too large for factor degree {d}")
        for combo in itertools.product(*value_divs):
            qc = _interpolate([Fraction(x) for x in pts], combo)
            if len(qc) - 1 != d:
                continue
            if any(c.denominator != 1 for c in qc):
                continue
            g = IntPolynomial.from_coeffs(int(c) for c in qc).primitive()
            if g.degree != d:
                continue
            quo, rem = _q_divmod(list(p.fraction_coeffs()),
                                 list(g.fraction_coeffs()))
            if not rem:
                return g
    return None


def _factor_squarefree(p):
    """Irreducible factors of a primitive squarefree integer polynomial."""
    out = []
    for r in _rational_roots(p):
        lin = IntPolynomial.of(-r.numerator, r.denominator).primitive()
        out.append(lin)
        p = poly_div_exact(p, lin) if lin.leading == 1 else _exact_q_div(p, lin)
    p = p.primitive() if not p.is_zero else p
    while p.degree > 0:
        g = _kronecker_factor(p)
        if g is None:
            out.append(p)
            break
        out.append(g)
        p = _exact_q_div(p, g).primitive()
    return out


def _exact_q_div(p, q):
    quo, rem = _q_divmod(list(p.fraction_coeffs()), list(q.fraction_coeffs()))
    if rem:
        raise ValueError("not divisible")
    den = 1
    for c in quo:
        den = den * c.denominator // gcd(den, c.denominator)
    return IntPolynomial.from_coeffs(c * den for c in quo).primitive()


@dataclass(frozen=True)
class Factorization:
    """content * prod(factor^multiplicity) == original polynomial."""

    content: Fraction
    factors: tuple  # of (IntPolynomial, int), factors primitive with lead > 0

    def __iter__(self):
        return iter(self.factors)

    def reconstruct(self):
        prod = IntPolynomial.of(1)
        for f, m in self.factors:
            prod = prod * f**m
        cs = tuple(Fraction(c) * self.content for c in prod.coeffs)
        if any(c.denominator != 1 for c in cs):
            raise AssertionError("non-integral reconstruction")
        return IntPolynomial.from_coeffs(int(c) for c in cs)


def factor_int_poly(p):
    """Complete factorization over Q into primitive irreducible factors.

    Returns a Factorization; the content carries sign and any constant
    so that the factors multiply back to the input exactly.
    """
    if p.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    if p.degree == 0:
        return Factorization(Fraction(p.coeffs[0]), ())
    prim = p.primitive()
    content = Fraction(p.leading, prim.leading)
    factors = {}
    # powers of x first
    k = 0
    cs = list(prim.coeffs)
    while cs[0] == 0:
        cs.pop(0)
        k += 1
    if k:
        factors[X] = k
        prim = IntPolynomial.from_coeffs(cs)
    for sqf, mult in squarefree_decomposition(prim):
        for irr in _factor_squarefree(sqf):
            factors[irr] = factors.get(irr, 0) + mult
    ordered = tuple(sorted(factors.items(), key=lambda fm: (fm[0].degree, fm[0].coeffs)))
    return Factorization(content, ordered)


# ---------------------------------------------------------------------------
# Sturm sequences and real root isolation

def sturm_chain(p):
    """Sturm chain of a squarefree integer polynomial (Fraction lists)."""
    chain = [list(p.fraction_coeffs())]
    d = list(p.derivative().fraction_coeffs())
    if d:
        chain.append(d)
    while len(chain[-1]) > 1:
        _, r = _q_divmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _eval_q(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sign_variations_at(chain, x):
    signs = []
    for cs in chain:
        v = _eval_q(cs, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p, lo, hi, chain=None):
    """Number of distinct real roots of squarefree p in (lo, hi]."""
    if chain is None:
        chain = sturm_chain(p)
    return _sign_variations_at(chain, Fraction(lo)) - _sign_variations_at(chain, Fraction(hi))


def cauchy_root_bound(p):
    """All complex roots satisfy |z| < this rational bound."""
    if p.degree < 1:
        return Fraction(1)
    lead = abs(p.leading)
    m = max(abs(c) for c in p.coeffs[:-1]) if p.degree else 0
    return 1 + Fraction(m, lead)


def isolate_real_roots(p):
    """Disjoint open rational intervals, one simple real root in each.

    p must be squarefree. Each returned (lo, hi) has p(lo)*p(hi) < 0.
    """
    if p.degree < 1:
        return []
    chain = sturm_chain(p)
    bound = cauchy_root_bound(p) + 1
    work = [(-bound, bound)]
    done = []
    while work:
        lo, hi = work.pop()
        n = sturm_count(p, lo, hi, chain)
        if n == 0:
            continue
        if n == 1 and p(lo) * p(hi) < 0:
            done.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if p(mid) == 0:
            # rational root: shrink to a bracket around it
            eps = Fraction(1, 4)
            while sturm_count(p, mid - eps, mid + eps, chain) > 1:
                eps /= 2
            done.append((mid - eps, mid + eps))
            work.append((lo, mid - eps))
            work.append((mid + eps, hi))
            continue
        work.append((lo, mid))
        work.append((mid, hi))
    return sorted(done)


def refine_root_interval(p, lo, hi, width):
    """Bisect a sign-change bracket of p until it is narrower than width."""
    flo = p(lo)
    if flo == 0:
        raise ValueError("endpoint is a root")
    while hi - lo >= width:
        mid = (lo + hi) / 2
        fm = p(mid)
        if fm == 0:
            # nudge; p is squarefree so a tiny shift restores a bracket
            mid += (hi - lo) / 16
            fm = p(mid)
        if (fm > 0) == (flo > 0):
            lo = mid
            flo = fm
        else:
            hi = mid
    return lo, hi
