"""Exact arithmetic: coefficient fields, (Laurent) polynomials, localizations, linear algebra."""

from .field import GF, QQ, Field, Mod, PrimeField, RationalField, binomial, field_from_name
from .localized import LocalizedElement, LocalizedRing
from .polynomial import Polynomial, PolynomialRing, exact_divide_binomial, taylor_shift

__all__ = [
    "GF", "QQ", "Field", "Mod", "PrimeField", "RationalField", "binomial", "field_from_name",
    "LocalizedElement", "LocalizedRing", "Polynomial", "PolynomialRing",
    "exact_divide_binomial", "taylor_shift",
]
