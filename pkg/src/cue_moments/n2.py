"""Closed forms for U(2): derivative moments, the log-moment and the mean zero count."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from scipy import integrate

from .errors import ValidationError
from .special import hyp3f2_continued, hyp3f2_exact, hyp3f2_numeric

__all__ = [
    "u2_moment_sum",
    "u2_moment_3f2",
    "u2_moment_real_k",
    "u2_moment_integer_formula_continued",
    "u2_moment_real_formula_continued",
    "u2_log_moment",
    "u2_mean_zero_count",
    "jensen_log_moment",
    "ComparisonTriple",
    "comparison_triple",
]


def _check_k(k):
    if not isinstance(k, int) or k < 0:
        raise ValidationError("k must be a non-negative integer")


def u2_moment_sum(k: int, q) -> Fraction:
    """E|Lambda'(x)|^{2k} over U(2) as a finite sum in q = |x|^2."""
    _check_k(k)
    q = Fraction(q)
    if q < 0:
        raise ValidationError("q = |x|^2 must be non-negative")
    return sum(
        (Fraction(math.comb(k, m) ** 2 * 4**m * math.comb(2 * k - 2 * m, k - m), k - m + 1) * q**m
         for m in range(k + 1)),
        Fraction(0),
    )


def u2_moment_3f2(k: int, q) -> Fraction:
    """Same moment as a terminating 3F2(-1-k, -k, -k; 1, 1/2-k; q)."""
    _check_k(k)
    q = Fraction(q)
    if q < 0:
        raise ValidationError("q = |x|^2 must be non-negative")
    catalan = Fraction(math.comb(2 * k, k), k + 1)
    return catalan * hyp3f2_exact(-1 - k, -k, -k, 1, Fraction(1, 2) - k, q)


def u2_moment_real_k(k: float, x_abs: float) -> float:
    """Moment for real k and |x| >= 1: (2|x|)^{2k} 3F2(1/2, -k, -k; 1, 2; |x|^-2).

    At |x| = 1 the moment itself needs k > -1; the series converges
    for a wider range, and its own condition is checked by the summation.
    """
    x_abs = float(x_abs)
    if x_abs < 1:
        raise ValidationError("real-k formula needs |x| >= 1")
    # k <= -5/4 at |x| = 1 is left to the series, which reports its own divergence
    if x_abs == 1 and -1.25 < k <= -1:
        raise ValidationError("at |x| = 1 the moment exists only for k > -1")
    return (2 * x_abs) ** (2 * k) * hyp3f2_numeric(0.5, -k, -k, 1, 2, x_abs**-2)


def u2_moment_integer_formula_continued(k: float, x_abs: float) -> complex:
    """The integer-k 3F2 form with k real, continued analytically in its argument."""
    with mpmath.workdps(30):
        k = mpmath.mpf(k)
        pref = mpmath.binomial(2 * k, k) / (k + 1)
        return complex(pref) * hyp3f2_continued(-1 - k, -k, -k, 1, mpmath.mpf(1) / 2 - k, mpmath.mpf(x_abs) ** 2)


def u2_moment_real_formula_continued(k: float, x_abs: float) -> complex:
    """The real-k 3F2 form, continued to |x| < 1 where its argument exceeds 1."""
    with mpmath.workdps(30):
        x = mpmath.mpf(x_abs)
        return complex((2 * x) ** (2 * mpmath.mpf(k))) * hyp3f2_continued(0.5, -k, -k, 1, 2, 1 / x**2)


def u2_mean_zero_count(u: float) -> float:
    """Expected number of zeros of Lambda' in |z| <= u for U(2)."""
    if not 0 <= u <= 1:
        raise ValidationError("u must lie in [0, 1]")
    return (2 * u * math.sqrt(1 - u * u) + math.acos(1 - 2 * u * u)) / math.pi


def u2_log_moment(r: float) -> float:
    """E log|Lambda'(r)| over U(2) for 0 <= r < 1."""
    if not 0 <= r < 1:
        raise ValidationError("r must lie in [0, 1)")
    f = hyp3f2_numeric(0.5, 0.5, 0.5, 1.5, 1.5, r * r)
    return (2 * r * f + r * math.sqrt(1 - r * r) + math.asin(r)) / math.pi - 0.5


def _count_over_u(u: float) -> float:
    # acos(1 - 2u^2) = 2 asin(u); asin(u)/u is expanded near 0 to avoid 0/0
    if u < 0.05:
        s, term, n = 0.0, 1.0, 0
        while term > 1e-18:
            s += term
            n += 1
            term *= (2 * n - 1) ** 2 / (2 * n * (2 * n + 1)) * u * u
        ratio = s
    else:
        ratio = math.asin(u) / u
    return (2 * math.sqrt(1 - u * u) + 2 * ratio) / math.pi


def jensen_log_moment(r: float) -> float:
    """-1/2 plus the integral of the mean zero count over u, by adaptive quadrature."""
    if not 0 <= r < 1:
        raise ValidationError("r must lie in [0, 1)")
    value, _ = integrate.quad(_count_over_u, 0.0, r, epsabs=1e-13, epsrel=1e-13, limit=200)
    return -0.5 + value


@dataclass(frozen=True)
class ComparisonTriple:
    """Monte Carlo value next to both closed forms at a (k, |x|) point."""

    k: float
    x_abs: float
    monte_carlo: float
    monte_carlo_error: float
    integer_formula: complex
    real_formula: complex


def comparison_triple(k: float, x_abs: float, samples: int = 10**5, seed: int = 0) -> ComparisonTriple:
    from .haar import mc_moment

    est = mc_moment(2, k, x_abs, samples, seed)
    return ComparisonTriple(
        k,
        x_abs,
        est.mean,
        est.std_error,
        u2_moment_integer_formula_continued(k, x_abs),
        u2_moment_real_formula_continued(k, x_abs),
    )
