"""Certified classification of polynomial roots by magnitude.

Roots of an irreducible integer polynomial are tagged small (|z| < 1),
unit (|z| = 1) or large (|z| > 1), with no floating point anywhere:

* unit-modulus roots force the polynomial to be palindromic, and for a
  palindromic polynomial the substitution y = x + 1/x turns unit-circle
  roots into real roots of a half-degree polynomial in (-2, 2), counted
  by Sturm sequences;
* off-circle roots are counted with the Schur-Cohn transform, run at
  rational radii; a completed run at radius r certifies that no root has
  modulus exactly r, so its count is trustworthy.  When the plain run at
  r = 1 degenerates, a resultant-based separation bound supplies radii
  provably between the small moduli and 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import (
    IntPolynomial,
    cauchy_root_bound,
    isolate_real_roots,
    refine_root_interval,
    sturm_chain,
    sturm_count,
)


class SchurSingular(Exception):
    """The Schur-Cohn chain degenerated; retry at a perturbed radius."""


def _schur_inside(coeffs):
    """Roots with |z| < 1 of a Fraction-coefficient polynomial.

    Requires no roots on the unit circle; raises SchurSingular whenever
    the transform chain degenerates (which in particular happens when a
    root lies on the circle). A completed run is self-certifying.
    """
    p = [Fraction(c) for c in coeffs]
    while p and p[-1] == 0:
        p.pop()
    if len(p) <= 1:
        return 0
    n = len(p) - 1
    a0, an = p[0], p[-1]
    gamma = a0 * a0 - an * an
    if gamma == 0:
        raise SchurSingular("|a0| == |a_n|")
    rev = p[::-1]
    tp = [a0 * c - an * r for c, r in zip(p, rev)]
    tp.pop()  # leading term cancels by construction
    while tp and tp[-1] == 0:
        tp.pop()
    if len(tp) - 1 != n - 1:
        raise SchurSingular("degree collapse in Schur transform")
    inner = _schur_inside(tp)
    return inner if gamma > 0 else n - inner


def schur_count_at_radius(f, radius):
    """Count of roots of f with |z| < radius, or None if the run degenerates."""
    r = Fraction(radius)
    scaled = f.shift_scale(r.numerator, r.denominator)
    try:
        return _schur_inside(scaled.fraction_coeffs())
    except SchurSingular:
        return None


def _sylvester_resultant(p, q):
    """Resultant of two integer polynomials via Bareiss elimination."""
    m, n = p.degree, q.degree
    if m < 0 or n < 0:
        return 0
    size = m + n
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([0] * i + pc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + qc + [0] * (size - n - 1 - i))
    # fraction-free Bareiss
    a = [row[:] for row in rows]
    denom = 1
    sign = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for j in range(k + 1, size):
                if a[j][k] != 0:
                    a[k], a[j] = a[j], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // denom
            a[i][k] = 0
        denom = a[k][k]
    return sign * a[size - 1][size - 1]


def _separation_gap(f):
    """Rational g > 0 with | |z|^2 - 1 | >= g for every root of f.

    Valid for irreducible non-palindromic f of degree >= 2, where
    Res(f, rev f) is a nonzero integer.
    """
    d = f.degree
    res = _sylvester_resultant(f, f.reversal())
    if res == 0:
        raise ArithmeticError("reciprocal root pair in a non-palindromic factor")
    bound = cauchy_root_bound(f)
    pair_bound = 1 + bound * bound
    g = Fraction(1, abs(f.leading) ** (2 * d)) / pair_bound ** (d * d - 1)
    return min(g, Fraction(1, 2))


def _certified_inside_count(f):
    """Number of roots of irreducible non-palindromic f with |z| < 1."""
    d = f.degree
    small = schur_count_at_radius(f, 1)
    large_direct = schur_count_at_radius(f.reversal(), 1)
    if small is not None and large_direct is not None and small + large_direct == d:
        return small
    g = _separation_gap(f)
    for j in range(64):
        r = 1 - g * Fraction(50 + j, 200 + 4 * j)  # stays within (1 - g/2, 1)
        count = schur_count_at_radius(f, r)
        if count is not None:
            return count
    raise ArithmeticError("could not find a regular Schur radius in the gap")


def _palindromic_trace_poly(f):
    """g with f(x) = x^(d/2) g(x + 1/x) for palindromic f of even degree."""
    d = f.degree
    m = d // 2
    # p_k(y) = x^k + x^(-k) in terms of y = x + 1/x
    basis = [IntPolynomial.of(2), IntPolynomial.of(0, 1)]
    for _ in range(2, m + 1):
        basis.append(IntPolynomial.of(0, 1) * basis[-1] - basis[-2])
    g = IntPolynomial.of(f.coeffs[m])
    for k in range(1, m + 1):
        g = g + f.coeffs[m + k] * basis[k]
    return g


def _unit_circle_count(f):
    """Exact number of roots of irreducible f (degree >= 2) with |z| = 1."""
    if not f.is_palindromic():
        return 0
    if f.degree % 2 == 1:
        # odd palindromic polynomials have the root -1, impossible here
        raise ArithmeticError("odd palindromic polynomial cannot be irreducible")
    g = _palindromic_trace_poly(f)
    return 2 * sturm_count(g, Fraction(-2), Fraction(2))


def _tag_real_root(f, lo, hi):
    """small/large tag for an isolated real root (never exactly +-1 here)."""
    while True:
        if hi < -1 or lo > 1:
            return "large", (lo, hi)
        if lo > -1 and hi < 1:
            return "small", (lo, hi)
        lo, hi = refine_root_interval(f, lo, hi, (hi - lo) / 2)


@dataclass(frozen=True)
class RootClass:
    """Magnitude census of the roots of one irreducible factor."""

    factor: IntPolynomial
    small: int
    unit: int
    large: int
    real_roots: tuple          # of (tag, (lo, hi)) with rational endpoints
    complex_annuli: tuple      # of (tag, (rlo, rhi), pair_count)
    conjugate_to_perron: bool = False

    @property
    def degree(self):
        return self.factor.degree

    def all_at_least_unit(self):
        return self.small == 0

    def all_small(self):
        return self.large == 0 and self.unit == 0

    def mixed(self):
        return self.small > 0 and (self.large > 0 or self.unit > 0)


def _complex_annuli(f, tagged_real, small, unit, large):
    """Coarse certified modulus brackets for the complex conjugate pairs."""
    real_small = sum(1 for t, _ in tagged_real if t == "small")
    real_large = sum(1 for t, _ in tagged_real if t == "large")
    pairs_small = (small - real_small) // 2
    pairs_large = (large - real_large) // 2
    out = []
    if unit:
        out.append(("unit", (Fraction(1), Fraction(1)), unit // 2))
    bound = cauchy_root_bound(f)

    def count_below(r):
        # exact count of all roots with modulus < r, nudging off singular radii
        step = Fraction(1, 64)
        for j in range(200):
            c = schur_count_at_radius(f, r + j * step * r / 100)
            if c is not None:
                return c
        raise ArithmeticError("no regular radius near bracket endpoint")

    for tag, lo, hi, pairs in (("small", Fraction(0), Fraction(1), pairs_small),
                               ("large", Fraction(1), bound + 1, pairs_large)):
        if pairs <= 0:
            continue
        # single coarse annulus per side; enough detail for reports
        out.append((tag, (lo, hi), pairs))
    return tuple(out)


def classify_roots(f):
    """RootClass of an irreducible integer polynomial."""
    if f.degree < 1:
        raise ValueError("constant polynomial has no roots to classify")
    if f.degree == 1:
        root = Fraction(-f.coeffs[0], f.coeffs[1])
        mag = abs(root)
        if mag < 1:
            tag = "small"
        elif mag == 1:
            tag = "unit"
        else:
            tag = "large"
        counts = {"small": 0, "unit": 0, "large": 0}
        counts[tag] = 1
        return RootClass(
            factor=f,
            small=counts["small"],
            unit=counts["unit"],
            large=counts["large"],
            real_roots=((tag, (root, root)),),
            complex_annuli=(),
        )

    d = f.degree
    unit = _unit_circle_count(f)
    if f.is_palindromic():
        small = (d - unit) // 2
        large = small
    else:
        small = _certified_inside_count(f)
        large = d - small
    tagged = tuple(_tag_real_root(f, lo, hi) for (lo, hi) in isolate_real_roots(f))
    real_small = sum(1 for t, _ in tagged if t == "small")
    real_large = sum(1 for t, _ in tagged if t == "large")
    if real_small > small or real_large > large:
        raise AssertionError("real root tags disagree with Schur-Cohn counts")
    if (small - real_small) % 2 or (large - real_large) % 2:
        raise AssertionError("complex root counts are not paired")
    annuli = _complex_annuli(f, tagged, small, unit, large)
    return RootClass(
        factor=f,
        small=small,
        unit=unit,
        large=large,
        real_roots=tagged,
        complex_annuli=annuli,
    )
