"""Real number field arithmetic Q(theta) with certified sign decisions.

A field is an irreducible integer minimal polynomial together with an
isolating interval that pins down one real root theta. Elements are
polynomials in theta with Fraction coefficients, reduced mod the minimal
polynomial. Zero tests are exact (an element is zero iff its reduced
coefficient vector is zero); sign tests refine the isolating interval
with interval Horner evaluation until zero is excluded, which always
terminates for nonzero elements.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from .poly import IntPolynomial, refine_root_interval


class RatInterval:
    """Closed interval with Fraction endpoints, basic exact arithmetic."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo = Fraction(lo)
        hi = Fraction(hi)
        if lo > hi:
            raise ValueError("empty interval")
        self.lo = lo
        self.hi = hi

    def __add__(self, other):
        if isinstance(other, RatInterval):
            return RatInterval(self.lo + other.lo, self.hi + other.hi)
        return RatInterval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other if isinstance(other, RatInterval) else -Fraction(other))

    def __mul__(self, other):
        if not isinstance(other, RatInterval):
            other = RatInterval(other, other)
        vals = (self.lo * other.lo, self.lo * other.hi,
                self.hi * other.lo, self.hi * other.hi)
        return RatInterval(min(vals), max(vals))

    __rmul__ = __mul__

    def contains_zero(self):
        return self.lo <= 0 <= self.hi

    @property
    def width(self):
        return self.hi - self.lo

    def mid(self):
        return (self.lo + self.hi) / 2

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


def interval_horner(coeffs, box):
    """Evaluate a Fraction-coefficient polynomial on a RatInterval."""
    acc = RatInterval(0, 0)
    for c in reversed(coeffs):
        acc = acc * box + c
    return acc


_ZERO = Fraction(0)


class NumberField:
    """Q(theta) for a distinguished real root theta of an irreducible poly."""

    def __init__(self, minpoly, root_interval, symbol="x"):
        if minpoly.degree < 2:
            raise ValueError("use plain Fractions for degree-1 fields")
        lo, hi = Fraction(root_interval[0]), Fraction(root_interval[1])
        if minpoly(lo) == 0 or minpoly(hi) == 0 or minpoly(lo) * minpoly(hi) > 0:
            raise ValueError("interval must bracket a sign change of the minimal polynomial")
        self.minpoly = minpoly
        self.symbol = symbol
        self.degree = minpoly.degree
        self._lock = threading.Lock()
        self._lo = lo
        self._hi = hi
        self._key = (minpoly.coeffs, lo, hi)
        self._min_fracs = list(minpoly.fraction_coeffs())
        self._quad = self._quadratic_form() if self.degree == 2 else None

    def _quadratic_form(self):
        """(vertex, scale, disc): theta = vertex + scale*sqrt(disc), exact.

        Lets degree-2 fields use integer square roots for floor and sign
        instead of interval refinement.
        """
        m0, m1, m2 = (Fraction(c) for c in self.minpoly.coeffs)
        disc = m1 * m1 - 4 * m2 * m0
        if disc <= 0:
            raise ValueError("real quadratic field needs a positive discriminant")
        vertex = -m1 / (2 * m2)
        # branch: theta above or below the vertex, decided by the interval
        if self._lo >= vertex:
            scale = 1 / (2 * abs(m2))
        elif self._hi <= vertex:
            scale = -1 / (2 * abs(m2))
        else:
            lo, hi = self._lo, self._hi
            while not (lo >= vertex or hi <= vertex):
                lo, hi = refine_root_interval(self.minpoly, lo, hi, (hi - lo) / 2)
            scale = 1 / (2 * abs(m2)) if lo >= vertex else -1 / (2 * abs(m2))
        return vertex, scale, disc

    # -- root interval management -------------------------------------

    def root_interval(self, width=None):
        with self._lock:
            if width is not None:
                while self._hi - self._lo >= width:
                    self._lo, self._hi = refine_root_interval(
                        self.minpoly, self._lo, self._hi, (self._hi - self._lo) / 2)
            return RatInterval(self._lo, self._hi)

    def _refine_once(self):
        with self._lock:
            self._lo, self._hi = refine_root_interval(
                self.minpoly, self._lo, self._hi, (self._hi - self._lo) / 2)

    # -- element constructors -----------------------------------------

    def element(self, coeffs):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if len(cs) > self.degree:
            _, cs = _poly_divmod(cs, self._min_fracs)
        cs += [_ZERO] * (self.degree - len(cs))
        return NumberFieldElement(self, tuple(cs))

    def zero(self):
        return self.element([0])

    def one(self):
        return self.element([1])

    def gen(self):
        return self.element([0, 1])

    def from_rational(self, q):
        return self.element([Fraction(q)])

    def __eq__(self, other):
        return isinstance(other, NumberField) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"NumberField({self.minpoly}, {self.symbol} in [{self._lo}, {self._hi}])"


class NumberFieldElement:
    """Element of a NumberField; coefficient tuple in the power basis."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    # -- basic queries --------------------------------------------------

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.coeffs[0]

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, NumberFieldElement):
            if other.field._key != self.field._key:
                raise ValueError("elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NumberFieldElement(
            self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElement(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        prod = [Fraction(0)] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
        return self.field.element(prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self):
        """Extended Euclid against the minimal polynomial."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero field element")
        # invariant: r1 = s1 * self (mod minpoly)
        r0 = list(self.field._min_fracs)
        r1 = [c for c in self.coeffs]
        while r1 and r1[-1] == 0:
            r1.pop()
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
            if not r1:
                raise ArithmeticError("minimal polynomial is not irreducible")
        c = r1[0]
        return self.field.element([x / c for x in s1])

    # -- order ------------------------------------------------------------

    def _as_quadratic(self):
        """(A, B, disc) with value = A + B*sqrt(disc), for degree-2 fields."""
        vertex, scale, disc = self.field._quad
        a, b = self.coeffs
        return a + b * vertex, b * scale, disc

    def sign(self):
        if self.is_zero():
            return 0
        if self.field._quad is not None:
            a, b, disc = self._as_quadratic()
            if b == 0:
                return 1 if a > 0 else -1
            if a == 0:
                return 1 if b > 0 else -1
            if a > 0 and b > 0:
                return 1
            if a < 0 and b < 0:
                return -1
            # opposite signs: compare a^2 against b^2 * disc
            bigger_rational = a * a > b * b * disc
            if a > 0:
                return 1 if bigger_rational else -1
            return -1 if bigger_rational else 1
        field = self.field
        for _ in range(4000):
            box = field.root_interval()
            val = interval_horner(self.coeffs, box)
            if not val.contains_zero():
                return 1 if val.lo > 0 else -1
            field._refine_once()
        raise ArithmeticError("sign refinement did not converge")

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, NumberFieldElement):
            return self.field._key == other.field._key and self.coeffs == other.coeffs
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field._key, self.coeffs))

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- numeric views -----------------------------------------------------

    def interval(self, width):
        """A RatInterval of at most the given width containing the value."""
        width = Fraction(width)
        field = self.field
        for _ in range(4000):
            box = field.root_interval()
            val = interval_horner(self.coeffs, box)
            if val.width < width:
                return val
            field.root_interval(box.width / 2)
        raise ArithmeticError("interval refinement did not converge")

    def __float__(self):
        if self.field._quad is not None:
            from math import sqrt

            a, b, disc = self._as_quadratic()
            return float(a) + float(b) * sqrt(float(disc))
        box = self.interval(Fraction(1, 2**56))
        return float(box.mid())

    def __floor__(self):
        if self.is_rational():
            return self.coeffs[0].numerator // self.coeffs[0].denominator
        if self.field._quad is not None:
            return self._quad_floor()
        width = Fraction(1, 4)
        for _ in range(4000):
            box = self.interval(width)
            flo = box.lo.numerator // box.lo.denominator
            fhi = box.hi.numerator // box.hi.denominator
            if flo == fhi:
                return flo
            width /= 2**8
        raise ArithmeticError("floor refinement did not converge")

    def _quad_floor(self):
        """Exact floor of A + B*sqrt(disc) via integer square roots."""
        from math import isqrt

        a, b, disc = self._as_quadratic()
        # value = (P + s*sqrt(R)) / Q with integers P, Q > 0, R >= 0
        bsq = b * b * disc
        p, q = a.numerator, a.denominator
        r, s_den = bsq.numerator, bsq.denominator
        P = p * s_den
        Q = q * s_den
        R = q * q * r * s_den
        s = 1 if b > 0 else -1

        def value_ge(c):
            # is (P + s*sqrt(R))/Q >= c, exactly
            e = c * Q - P
            if s > 0:
                return e <= 0 or R >= e * e
            return e <= 0 and e * e >= R

        t = (P + s * isqrt(R)) // Q
        while not value_ge(t):
            t -= 1
        while value_ge(t + 1):
            t += 1
        return t

    def __repr__(self):
        sym = self.field.symbol
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                term = str(c)
            else:
                xs = sym if i == 1 else f"{sym}^{i}"
                term = xs if c == 1 else (f"-{xs}" if c == -1 else f"{c}*{xs}")
            parts.append(term)
        if not parts:
            return "0"
        out = parts[0]
        for t in parts[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out


# -- helpers on raw Fraction coefficient lists -----------------------------

def _poly_divmod(a, b):
    a = a[:]
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        coef = a[-1] * inv
        q[shift] = coef
        for i, bc in enumerate(b):
            a[shift + i] -= coef * bc
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    while q and q[-1] == 0:
        q.pop()
    return q, a


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    out = list(a) + [Fraction(0)] * (len(b) - len(a))
    for i, y in enumerate(b):
        out[i] -= y
    while out and out[-1] == 0:
        out.pop()
    return out


def sqrt_field(d, symbol=None):
    """Q(sqrt(d)) for a positive nonsquare integer d."""
    from math import isqrt

    d = int(d)
    if d <= 0:
        raise ValueError("adjoin sqrt d needs a positive integer")
    r = isqrt(d)
    if r * r == d:
        raise ValueError(f"{d} is a perfect square; the field is just Q")
    minpoly = IntPolynomial.of(-d, 0, 1)
    return NumberField(minpoly, (r, r + 1), symbol or "x")
