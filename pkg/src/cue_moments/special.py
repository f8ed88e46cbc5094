"""Laguerre polynomials, 3F2 series and the Bessel entry series."""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from .algebra import RatPolynomial, TaylorSeries, generalized_binomial
from .errors import (
    ConvergenceConditionViolated,
    NonTerminating,
    PochhammerPole,
    SlowConvergence,
    ValidationError,
)

__all__ = [
    "laguerre",
    "laguerre_symbolic",
    "laguerre_series",
    "hyp3f2_exact",
    "hyp3f2_numeric",
    "hyp3f2_continued",
    "bessel_g_series",
]


def laguerre(n: int, alpha: int) -> RatPolynomial:
    """Generalized Laguerre polynomial L_n^(alpha)(t) with exact coefficients.

    Orders n < 0 give the zero polynomial.  The explicit sum
    sum_i (-1)^i C(n+alpha, n-i) t^i / i! is used for every integer alpha,
    negative ones included.
    """
    if n < 0:
        return RatPolynomial()
    return RatPolynomial(
        Fraction((-1) ** i * generalized_binomial(n + alpha, n - i), math.factorial(i))
        for i in range(n + 1)
    )


def laguerre_series(n: int, alpha: int, order: int) -> TaylorSeries:
    """L_n^(alpha)(t) as a t-series truncated at ``order``."""
    return TaylorSeries.univariate(list(laguerre(n, alpha).coefficients), order)


def laguerre_symbolic(offset: int, alpha: int, degree_cap: int) -> TaylorSeries:
    """L_{N+offset}^(alpha)(t) with N left symbolic, truncated at t^degree_cap.

    Rewrites C(n+alpha, n-i) as C(n+alpha, alpha+i) so that the lower index is a
    fixed integer and the top is linear in N.  The identity needs n >= 0, so the
    result is valid for integers N >= -offset.
    """
    if alpha < 1:
        raise ValidationError("symbolic Laguerre entries need alpha >= 1")
    top = RatPolynomial((offset + alpha, 1))
    coeffs = {}
    for i in range(degree_cap + 1):
        c = generalized_binomial(top, alpha + i) * Fraction((-1) ** i, math.factorial(i))
        coeffs[(i,)] = c
    return TaylorSeries((degree_cap,), coeffs)


def _nonpositive_int(x) -> bool:
    return x == int(x) and x <= 0


def hyp3f2_exact(a1, a2, a3, b1, b2, z) -> Fraction:
    """Terminating 3F2 evaluated as an exact finite Pochhammer sum."""
    a = [Fraction(v) for v in (a1, a2, a3)]
    b = [Fraction(v) for v in (b1, b2)]
    z = Fraction(z)
    stops = [-int(v) for v in a if _nonpositive_int(v)]
    if not stops:
        raise NonTerminating("no numerator parameter is a non-positive integer")
    last = min(stops)
    total = term = Fraction(1)
    if z == 0:
        return total
    for n in range(last):
        num = (a[0] + n) * (a[1] + n) * (a[2] + n)
        den = (b[0] + n) * (b[1] + n) * (n + 1)
        if den == 0:
            raise PochhammerPole(f"denominator Pochhammer vanishes at n={n + 1}")
        term = term * num * z / den
        total += term
    return total


def hyp3f2_numeric(a1, a2, a3, b1, b2, z, *, rtol: float = 1e-16, max_terms: int = 10**6) -> float:
    """Forward summation of 3F2 in double precision for 0 <= z <= 1.

    Terms are accumulated with ``math.fsum``.  Stops on an exact zero term
    (terminating case) or once a term's contribution drops below ``rtol``
    relative to the running sum, after all parameter shifts have passed.
    """
    a = [float(v) for v in (a1, a2, a3)]
    b = [float(v) for v in (b1, b2)]
    z = float(z)
    if not 0.0 <= z <= 1.0:
        raise ValidationError("z must lie in [0, 1]")
    terminating = any(_nonpositive_int(v) for v in a)
    if z == 1.0 and not terminating and not (sum(b) - sum(a) > 0):
        raise ConvergenceConditionViolated("3F2 at z=1 needs b1+b2-a1-a2-a3 > 0")
    settle = max(abs(v) for v in a + b) + 2
    terms = [1.0]
    term = 1.0
    running = 1.0
    for n in range(max_terms):
        num = (a[0] + n) * (a[1] + n) * (a[2] + n)
        if num == 0.0 or z == 0.0:
            return math.fsum(terms)
        den = (b[0] + n) * (b[1] + n) * (n + 1)
        if den == 0.0:
            raise PochhammerPole(f"denominator Pochhammer vanishes at n={n + 1}")
        term *= num * z / den
        terms.append(term)
        running += term
        if n > settle and abs(term) < rtol * abs(running):
            return math.fsum(terms)
    raise SlowConvergence(f"3F2 series not converged after {max_terms} terms")


def hyp3f2_continued(a1, a2, a3, b1, b2, z) -> complex:
    """3F2 anywhere in the plane, analytically continued past |z| = 1.

    Backed by mpmath; only used to reproduce comparison values that live
    outside the disk where the defining series converges.
    """
    return complex(mpmath.hyp3f2(a1, a2, a3, b1, b2, z))


def bessel_g_series(nu: int, order_cap: int) -> TaylorSeries:
    """g_nu(x) = sum_m x^m / (m! (m+nu)!), so that I_nu(2 sqrt x) = x^(nu/2) g_nu(x)."""
    if nu < 0 or order_cap < 0:
        raise ValidationError("nu and order_cap must be non-negative")
    return TaylorSeries.univariate(
        [Fraction(1, math.factorial(m) * math.factorial(m + nu)) for m in range(order_cap + 1)]
    )
