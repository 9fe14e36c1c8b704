"""Uniform helpers over exact scalars (Fraction or NumberFieldElement)."""

from __future__ import annotations

import math
from fractions import Fraction

from .field import NumberFieldElement


def sgn(x):
    if isinstance(x, NumberFieldElement):
        return x.sign()
    if x > 0:
        return 1
    return -1 if x < 0 else 0


def is_zero(x):
    if isinstance(x, NumberFieldElement):
        return x.is_zero()
    return x == 0


def is_rational(x):
    if isinstance(x, NumberFieldElement):
        return x.is_rational()
    return True


def as_fraction(x):
    if isinstance(x, NumberFieldElement):
        return x.as_fraction()
    return Fraction(x)


def floor_exact(x):
    if isinstance(x, NumberFieldElement):
        return math.floor(x)
    return Fraction(x).numerator // Fraction(x).denominator


def to_float(x):
    return float(x)


def dist_to_integers(x):
    """Exact distance from a scalar to the nearest integer."""
    f = floor_exact(x)
    frac = x - f
    other = 1 - frac
    return frac if sgn(frac - other) <= 0 else other


def is_integer(x):
    if isinstance(x, NumberFieldElement):
        return x.is_rational() and x.as_fraction().denominator == 1
    return Fraction(x).denominator == 1


def coerce_pair(a, b):
    """Lift a rational to the other operand's field if needed."""
    if isinstance(a, NumberFieldElement) and not isinstance(b, NumberFieldElement):
        return a, a.field.from_rational(b)
    if isinstance(b, NumberFieldElement) and not isinstance(a, NumberFieldElement):
        return b.field.from_rational(a), b
    return a, b


def scalar_field(x):
    return x.field if isinstance(x, NumberFieldElement) else None


def ratio_is_rational(a, b):
    """Exact test of whether a/b is rational (b nonzero)."""
    a, b = coerce_pair(a, b)
    q = a / b
    return is_rational(q)
