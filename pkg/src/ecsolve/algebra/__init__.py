"""Exact scalars, polynomials in P, rational functions and truncated series."""

from .poly import PPoly, PRatFunc, UsageError, poly_gcd, prat_normalize
from .rational import Q, Rational, format_rational, is_rational, parse_rational
from .series import (
    P_RATIONAL,
    RATIONAL,
    BiSeries,
    ResonanceError,
    series_add,
    series_mul,
    series_recip_shifted,
)

__all__ = [
    "BiSeries",
    "P_RATIONAL",
    "PPoly",
    "PRatFunc",
    "Q",
    "RATIONAL",
    "Rational",
    "ResonanceError",
    "UsageError",
    "format_rational",
    "is_rational",
    "parse_rational",
    "poly_gcd",
    "prat_normalize",
    "series_add",
    "series_mul",
    "series_recip_shifted",
]
