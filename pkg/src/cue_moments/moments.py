"""Exact moment engines for E|Lambda'(x)|^{2k} over Haar-random U(N).

Four independent routes at |x| = 1 (composition sum of binomial
determinants, k x k Laguerre determinant, N x N Laguerre determinant, and the
Painleve recursion in :mod:`cue_moments.painleve`) plus a bivariate route for
|x| != 1.  Polynomials in N are recovered by exact interpolation over integer
N, never by carrying N through the determinants.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .algebra import (
    RatPolynomial,
    TaylorSeries,
    exact_divide,
    generalized_binomial,
    lagrange_interpolate,
    series_exp,
    series_multiply,
)
from .determinant import _bareiss_int, determinant
from .errors import QEqualsOne, ValidationError
from .roots import aberth, polish_roots
from .special import bessel_g_series, laguerre_series, laguerre_symbolic

log = logging.getLogger(__name__)

METHODS = ("sumofdets", "laguerre_k", "laguerre_N", "painleve", "general_x")
POLY_METHODS = ("sumofdets", "laguerre_k", "painleve")

__all__ = [
    "METHODS",
    "POLY_METHODS",
    "charpoly_moment",
    "charpoly_moment_poly",
    "weak_compositions",
    "deriv_moment_sumofdets",
    "laguerre_k_series",
    "laguerre_k_extract",
    "deriv_moment_laguerre_k",
    "deriv_moment_laguerre_N",
    "general_x_entry",
    "deriv_moment_general_x",
    "deriv_moment",
    "deriv_moment_poly",
    "f_ratio",
    "b_k_leading",
    "roots_of_f",
]


def _check_k(k: int, minimum: int = 0):
    if not isinstance(k, int) or k < minimum:
        raise ValidationError(f"k must be an integer >= {minimum}")


def charpoly_moment(N: int, k: int) -> Fraction:
    """E|Lambda(1)|^{2k} = prod_{j=1..N} Gamma(j) Gamma(2k+j) / Gamma(k+j)^2."""
    if N < 1:
        raise ValidationError("N must be >= 1")
    _check_k(k)
    f = math.factorial
    num = den = 1
    for j in range(1, N + 1):
        num *= f(j - 1) * f(2 * k + j - 1)
        den *= f(k + j - 1) ** 2
    return Fraction(num, den)


@lru_cache(maxsize=None)
def charpoly_moment_poly(k: int) -> RatPolynomial:
    """Degree k^2 product form prod_j ( j!/(j+k)! prod_i (N+i+j+1) )."""
    _check_k(k)
    acc = RatPolynomial((1,))
    for j in range(k):
        acc = acc * Fraction(math.factorial(j), math.factorial(j + k))
        for i in range(k):
            acc = acc * RatPolynomial((i + j + 1, 1))
    return acc


def weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` non-negative integers summing to ``total``, colex order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    t = [0] * parts
    t[0] = total
    while True:
        yield tuple(t)
        i = next((i for i in range(parts - 1) if t[i]), None)
        if i is None:
            return
        v = t[i]
        t[i] = 0
        t[0] = v - 1
        t[i + 1] += 1


def deriv_moment_sumofdets(N: int, k: int) -> Fraction:
    """Composition sum of binomial determinants.

    (-1)^C(k,2) sum_m C(k,m) N^(k-m) (-1)^m sum_t multinomial(k+m; t)
    det[ C(N+k+i+j-2, 2k+t_j-1) ].  Binomials use the falling-factorial form so
    every integer N is allowed.
    """
    _check_k(k)
    if k == 0:
        return Fraction(1)
    # columns[j][t] = column j (0-based) differentiated t times
    columns = [
        [[generalized_binomial(N + k + i + j, 2 * k + t - 1) for i in range(k)] for t in range(2 * k + 1)]
        for j in range(k)
    ]
    fact = [math.factorial(i) for i in range(2 * k + 1)]
    total = 0
    for m in range(k + 1):
        s = k + m
        inner = 0
        count = 0
        for comp in weak_compositions(s, k):
            weight = fact[s]
            for tj in comp:
                weight //= fact[tj]
            cols = [columns[j][tj] for j, tj in enumerate(comp)]
            rows = [[cols[j][i] for j in range(k)] for i in range(k)]
            inner += weight * _bareiss_int(rows)
            count += 1
        if k >= 6:
            log.info("sumofdets N=%d k=%d: m=%d done (%d compositions)", N, k, m, count)
        total += math.comb(k, m) * N ** (k - m) * (-1) ** m * inner
    return Fraction((-1) ** (k * (k - 1) // 2) * total)


def laguerre_k_series(N, k: int, order: int | None = None) -> TaylorSeries:
    """det_{k x k}[ L_{N+i-j}^{(2k-1)}(t) ] as a t-series (default truncation 2k).

    ``N`` may be an int or the symbolic :meth:`RatPolynomial.variable`.
    """
    order = 2 * k if order is None else order
    if isinstance(N, RatPolynomial):
        entries = [[laguerre_symbolic(i - j, 2 * k - 1, order) for j in range(k)] for i in range(k)]
    else:
        entries = [[laguerre_series(N + i - j, 2 * k - 1, order) for j in range(k)] for i in range(k)]
    return determinant(entries)


def laguerre_k_extract(det_series: TaylorSeries, N, k: int):
    """(-1)^k sum_h C(k,h) N^(k-h) (k+h)! [t^(k+h)] det_series."""
    total = 0
    for h in range(k + 1):
        c = det_series.coefficient(k + h)
        if c:
            total = total + math.comb(k, h) * math.factorial(k + h) * (N ** (k - h)) * c
    return (-1) ** k * total


def deriv_moment_laguerre_k(N, k: int):
    """Moment from the k x k Laguerre determinant; symbolic N gives a polynomial."""
    _check_k(k)
    if k == 0:
        return RatPolynomial((1,)) if isinstance(N, RatPolynomial) else Fraction(1)
    value = laguerre_k_extract(laguerre_k_series(N, k), N, k)
    return value if isinstance(value, RatPolynomial) else Fraction(value)


def deriv_moment_laguerre_N(N: int, k: int) -> Fraction:
    """Moment from the N x N determinant of L_{j-l+k}^{(-2k-1)}(t)."""
    if N < 1:
        raise ValidationError("N must be >= 1")
    _check_k(k)
    if k == 0:
        return Fraction(1)
    order = 2 * k
    by_offset = {}
    zero = TaylorSeries((order,))
    entries = []
    for j in range(N):
        row = []
        for l in range(N):
            n = j - l + k
            if n < 0:
                row.append(zero)
                continue
            if n not in by_offset:
                by_offset[n] = laguerre_series(n, -2 * k - 1, order)
            row.append(by_offset[n])
        entries.append(row)
    det = determinant(entries)
    total = 0
    for h in range(k + 1):
        c = det.coefficient(k + h)
        if c:
            total += math.comb(k, h) * (-1) ** h * N ** (k - h) * math.factorial(k + h) * c
    return Fraction((-1) ** (k * N) * total)


def _residue_coefficient(a: int, k: int, m: int, n: int, q: Fraction) -> Fraction:
    """(1/2 pi i) \\oint w^(a-1) / ((w-1)^(m+k) (w-q)^(n+k)) dw, q != 1, via residues."""
    if m + n + 2 * k > a:
        return Fraction(0)
    s = q - 1
    at_q = Fraction(0)
    for l in range(n + k):
        at_q += generalized_binomial(a - 1, n + k - 1 - l) * generalized_binomial(-m - k, l) * q**l / s**l
    at_q *= q ** (a - n - k) / s ** (m + k)
    u = 1 - q
    at_1 = Fraction(0)
    for l in range(m + k):
        at_1 += generalized_binomial(a - 1, m + k - 1 - l) * generalized_binomial(-n - k, l) / u**l
    at_1 /= u ** (n + k)
    return at_q + at_1


def general_x_entry(a: int, k: int, q: Fraction) -> TaylorSeries:
    """F_{a,k}(t1, t2, x) as a bivariate series truncated at degree k in each variable."""
    q = Fraction(q)
    if q == 1:
        raise QEqualsOne("the residue expansion needs |x|^2 != 1")
    coeffs = {}
    for m in range(k + 1):
        for n in range(k + 1):
            c = _residue_coefficient(a, k, m, n, q)
            if c:
                coeffs[(m, n)] = c / (math.factorial(m) * math.factorial(n))
    return TaylorSeries((k, k), coeffs)


def deriv_moment_general_x(N: int, k: int, q) -> Fraction:
    """Moment at any |x|^2 = q != 1 from the bivariate k x k determinant."""
    q = Fraction(q)
    if q < 0:
        raise ValidationError("q = |x|^2 must be non-negative")
    if q == 1:
        raise QEqualsOne("use a unit-circle method (e.g. laguerre_k) for q = 1")
    if N < 1:
        raise ValidationError("N must be >= 1")
    _check_k(k)
    if k == 0:
        return Fraction(1)
    entries = [[general_x_entry(N + k + i + j + 1, k, q) for j in range(k)] for i in range(k)]
    det = determinant(entries)
    damp = TaylorSeries((k, k), {(m, 0): Fraction((-N) ** m, math.factorial(m)) for m in range(k + 1)})
    full = series_multiply(damp, det)
    c = full.coefficient((k, k))
    return Fraction((-1) ** (k * (k + 1) // 2) * math.factorial(k) ** 2 * c)


def deriv_moment(N: int, k: int, q=1, method: str = "laguerre_k") -> Fraction:
    """Dispatch to one engine.  ``q`` is |x|^2."""
    q = Fraction(q)
    if method not in METHODS:
        raise ValidationError(f"unknown method {method!r}; choose from {METHODS}")
    if method == "general_x":
        return deriv_moment_general_x(N, k, q)
    if q != 1:
        raise ValidationError(f"method {method} needs q = 1; use general_x")
    if method == "sumofdets":
        return deriv_moment_sumofdets(N, k)
    if method == "laguerre_k":
        return deriv_moment_laguerre_k(N, k)
    if method == "laguerre_N":
        return deriv_moment_laguerre_N(N, k)
    from .painleve import painleve_moment

    return painleve_moment(N, k)


def _eval_point(args):
    N, k, method = args
    return deriv_moment(N, k, 1, method)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("CUE_MOMENT_THREADS", "1")))
    except ValueError:
        return 1


@lru_cache(maxsize=None)
def _deriv_moment_poly(k: int, method: str, workers: int) -> RatPolynomial:
    xs = list(range(k, k + k * k + 2 * k + 1))
    jobs = [(N, k, method) for N in xs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_eval_point, jobs))
    else:
        values = []
        for job in jobs:
            values.append(_eval_point(job))
            log.debug("k=%d method=%s N=%d done", k, method, job[0])
    return lagrange_interpolate(list(zip(xs, values)))


def deriv_moment_poly(k: int, method: str = "laguerre_k", workers: int | None = None) -> RatPolynomial:
    """The moment as an exact polynomial of degree k^2+2k in N.

    Evaluates ``method`` at N = k, ..., k + k^2 + 2k and interpolates.  Results
    are cached per (k, method); ``workers`` > 1 spreads the evaluations over
    processes, results are collected in N order.
    """
    _check_k(k, 1)
    if method not in POLY_METHODS:
        raise ValidationError(f"method must be one of {POLY_METHODS}")
    return _deriv_moment_poly(k, method, workers or default_workers())


def f_ratio(k: int, method: str = "laguerre_k", workers: int | None = None) -> RatPolynomial:
    """f(N,k) = derivative moment / characteristic-polynomial moment, degree 2k."""
    return exact_divide(deriv_moment_poly(k, method, workers), charpoly_moment_poly(k))


def b_k_leading(k: int) -> Fraction:
    """Leading N-coefficient from the Bessel-determinant expression.

    Entries I_{i+j-1}(2 sqrt x) are replaced by g_{i+j-1}(x); the stripped
    x^{(i+j-1)/2} factors multiply out to x^{k^2/2} and cancel.
    """
    _check_k(k, 1)
    order = 2 * k
    det = determinant([[bessel_g_series(i + j + 1, order) for j in range(k)] for i in range(k)])
    emx = TaylorSeries.univariate([Fraction((-1) ** m, math.factorial(m)) for m in range(order + 1)])
    s = series_multiply(emx, det)
    total = sum(math.comb(k, h) * math.factorial(k + h) * s.coefficient(k + h) for h in range(k + 1))
    return Fraction((-1) ** (k * (k + 1) // 2) * total)


def roots_of_f(k: int, method: str = "laguerre_k", *, dps: int = 60, workers: int | None = None):
    """The 2k complex roots of f(N,k), found by Aberth iteration and mpmath-polished.

    Exact zero roots (vanishing low coefficients) are deflated first and
    reported as 0.  Returns ``(roots, residuals)``: roots as Python complex
    numbers with the imaginary part snapped to 0 when it is below 1e-30 after
    polishing, and residuals |f(z)| / sum_i |a_i| max(1, |z|)^i.
    """
    import mpmath

    poly = f_ratio(k, method, workers)
    coeffs = list(poly.coefficients)
    zeros = 0
    while coeffs[zeros] == 0:
        zeros += 1
    rest = coeffs[zeros:]
    scale = max(abs(c) for c in rest)
    polished = []
    if len(rest) > 1:
        approx = aberth([float(c / scale) for c in rest], tol=1e-14, max_iter=500)
        polished = polish_roots(rest, approx, dps=dps)
    roots, residuals = [], []
    with mpmath.workdps(dps):
        cs = [mpmath.mpf(c.numerator) / c.denominator for c in coeffs]
        for z in [mpmath.mpc(0)] * zeros + polished:
            if abs(z.imag) < mpmath.mpf(10) ** -30:
                z = mpmath.mpc(z.real, 0)
            val = mpmath.polyval(cs[::-1], z)
            mag = sum(abs(c) * max(1, abs(z)) ** i for i, c in enumerate(cs))
            residuals.append(float(abs(val) / mag))
            roots.append(complex(z))
    order = sorted(range(len(roots)), key=lambda i: (roots[i].real, roots[i].imag))
    return [roots[i] for i in order], [residuals[i] for i in order]
