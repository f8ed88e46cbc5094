"""Moments of the derivative of characteristic polynomials of Haar-random unitary matrices.

Exact engines work over the rationals (``fractions.Fraction``); Monte Carlo
estimates and the U(2) closed forms are floating point.
"""

from .algebra import RatPolynomial, TaylorSeries, format_rational, parse_rational
from .errors import CueMomentsError, ContractViolation, ValidationError
from .moments import (
    b_k_leading,
    charpoly_moment,
    charpoly_moment_poly,
    deriv_moment,
    deriv_moment_poly,
    f_ratio,
    roots_of_f,
)

__all__ = [
    "RatPolynomial",
    "TaylorSeries",
    "format_rational",
    "parse_rational",
    "CueMomentsError",
    "ContractViolation",
    "ValidationError",
    "b_k_leading",
    "charpoly_moment",
    "charpoly_moment_poly",
    "deriv_moment",
    "deriv_moment_poly",
    "f_ratio",
    "roots_of_f",
]

__version__ = "0.1.0"
