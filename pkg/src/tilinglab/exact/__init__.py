"""Exact linear algebra over Q and real number fields."""

from .poly import IntPolynomial, factor_int_poly, isolate_real_roots
from .field import NumberField, NumberFieldElement, RatInterval, sqrt_field
from .roots import RootClass, classify_roots
from .linalg import (
    BlockDecomposition,
    PerronData,
    block_decomposition,
    char_poly,
    large_component,
    perron_data,
)

__all__ = [
    "IntPolynomial",
    "factor_int_poly",
    "isolate_real_roots",
    "NumberField",
    "NumberFieldElement",
    "RatInterval",
    "sqrt_field",
    "RootClass",
    "classify_roots",
    "BlockDecomposition",
    "PerronData",
    "block_decomposition",
    "char_poly",
    "large_component",
    "perron_data",
]
