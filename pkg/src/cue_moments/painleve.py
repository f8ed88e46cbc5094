"""Series solution of the sigma-form ODE for t * d/dt log det[L_{N+i-j}^{(2k-1)}(t)].

With f(t) = sum_{j>=1} c_j t^j, the ODE

    t^2 f''^2 + 4 t f'^3 - (4k^2 - 4Nt + t^2 + 4f) f'^2
        - (2kN(2k+t) + (4N - 2t) f) f' - (kN - f)^2 = 0

is expanded exactly at fixed integers (N, k) and solved order by order:

* order 0 is -k^2 (N + 2 c_1)^2, a double root, so c_1 = -N/2;
* with that c_1, c_{j+1} drops out of the order-j equation, and c_j is fixed
  by order j.  Order 2 is quadratic in c_2 (roots 0 and the nonzero one), and
  for j = 2k+1 the linear coefficient vanishes, leaving c_{2k+1} free.

Those two spots need outside information.  Both are settled against the
Maclaurin coefficients of the Laguerre determinant itself (truncated at the
needed order): the quadratic picks its matching root, and the free
coefficient is only filled in when explicitly requested.  Moments need c_1..c_2k
only, so the free coefficient never enters them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import RatPolynomial, TaylorSeries, lagrange_interpolate, series_exp
from .errors import DegeneratePivot, ValidationError
from .moments import (
    charpoly_moment,
    deriv_moment_poly,
    f_ratio,
    laguerre_k_extract,
    laguerre_k_series,
)

__all__ = [
    "PainleveSeries",
    "painleve_coefficients",
    "ode_residual",
    "log_derivative_coefficients",
    "painleve_moment",
    "painleve_f_poly",
]


@dataclass(frozen=True)
class PainleveSeries:
    N: int
    k: int
    coefficients: tuple[Fraction, ...]  # c_1 .. c_M
    resolved_from_determinant: tuple[int, ...] = ()

    @property
    def M(self) -> int:
        return len(self.coefficients)

    def c(self, j: int) -> Fraction:
        return Fraction(0) if j == 0 else self.coefficients[j - 1]


def _conv(a, b, n):
    return sum(a[i] * b[n - i] for i in range(n + 1) if i < len(a) and n - i < len(b))


def _ode_coefficient(c: list, N: int, k: int, j: int) -> Fraction:
    """Coefficient of t^j in the ODE residual; ``c[i]`` is c_i with c[0] = 0."""
    size = j + 1
    f = [c[i] if i < len(c) else 0 for i in range(size)]
    fp = [(i + 1) * c[i + 1] if i + 1 < len(c) else 0 for i in range(size)]
    fpp = [(i + 2) * (i + 1) * c[i + 2] if i + 2 < len(c) else 0 for i in range(size)]
    fp2 = [_conv(fp, fp, n) for n in range(size)]
    fp3 = [_conv(fp2, fp, n) for n in range(size)]
    ffp = [_conv(f, fp, n) for n in range(size)]
    ffp2 = [_conv(f, fp2, n) for n in range(size)]

    def at(seq, n):
        return seq[n] if 0 <= n < len(seq) else 0

    r = Fraction(0)
    r += _conv(fpp, fpp, j - 2) if j >= 2 else 0
    r += 4 * at(fp3, j - 1)
    r -= 4 * k * k * at(fp2, j) - 4 * N * at(fp2, j - 1) + at(fp2, j - 2) + 4 * at(ffp2, j)
    r -= 4 * k * k * N * at(fp, j) + 2 * k * N * at(fp, j - 1) + 4 * N * at(ffp, j) - 2 * at(ffp, j - 1)
    r -= (k * N) ** 2 * (j == 0) - 2 * k * N * at(f, j) + _conv(f, f, j)
    return r


def ode_residual(series: PainleveSeries, upto: int | None = None) -> list[Fraction]:
    """Residual coefficients of t^0 .. t^upto (default M) for the truncated series."""
    c = [Fraction(0), *series.coefficients]
    upto = series.M if upto is None else upto
    return [_ode_coefficient(c, series.N, series.k, j) for j in range(upto + 1)]


def log_derivative_coefficients(N: int, k: int, order: int) -> list[Fraction]:
    """c_1..c_order of t * D'(t)/D(t) for D the k x k Laguerre determinant (direct route)."""
    d = laguerre_k_series(N, k, order).to_list()
    if not d[0]:
        raise ValidationError(f"Laguerre determinant vanishes at t=0 for N={N}, k={k}")
    c = [Fraction(0)] * (order + 1)
    for j in range(1, order + 1):
        # t D' = f D  =>  j d_j = sum_{i=1..j} c_i d_{j-i}
        s = j * d[j] - sum(c[i] * d[j - i] for i in range(1, j))
        c[j] = Fraction(s) / d[0]
    return c[1:]


def _polynomial_in_unknown(c, N, k, order, slot):
    """Residual at ``order`` as an exact polynomial (degree <= 3) in c[slot]."""
    pts = []
    for x in range(4):
        trial = list(c)
        trial[slot] = Fraction(x)
        pts.append((x, _ode_coefficient(trial, N, k, order)))
    return lagrange_interpolate(pts)


def _rational_roots_quadratic(p: RatPolynomial) -> list[Fraction] | None:
    a, b, c0 = p[2], p[1], p[0]
    disc = b * b - 4 * a * c0
    if disc < 0:
        return None
    num, den = disc.numerator, disc.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    root = Fraction(rn, rd)
    return sorted({(-b + root) / (2 * a), (-b - root) / (2 * a)})


def painleve_coefficients(N: int, k: int, M: int, *, resolve_free: bool = False) -> PainleveSeries:
    """Solve for c_1..c_M.

    ``resolve_free`` allows the free coefficient c_{2k+1} (only reached when
    M > 2k) to be taken from the Laguerre determinant; without it that order
    raises :class:`DegeneratePivot`.
    """
    if N < 1 or k < 1:
        raise ValidationError("painleve recursion needs N >= 1 and k >= 1")
    if M < 2 * k:
        raise ValidationError("truncation M must be at least 2k")
    c = [Fraction(0)] * (M + 2)
    anchor: list[Fraction] = []
    resolved = []

    def anchor_value(j):
        nonlocal anchor
        if len(anchor) < j:
            anchor = log_derivative_coefficients(N, k, max(j, 2))
        return anchor[j - 1]

    for j in range(1, M + 1):
        order = 0 if j == 1 else j
        p = _polynomial_in_unknown(c, N, k, order, j)
        if p.degree > 2:
            raise DegeneratePivot(j, N, k, f"order-{order} equation has degree {p.degree}")
        if p.degree == 1:
            c[j] = -p[0] / p[1]
        elif p.degree == 2:
            roots = _rational_roots_quadratic(p)
            if roots is None:
                raise DegeneratePivot(j, N, k, "quadratic with no rational root")
            if len(roots) == 1:
                c[j] = roots[0]
            else:
                target = anchor_value(j)
                if target not in roots:
                    raise DegeneratePivot(j, N, k, f"no root of {roots} matches the determinant")
                c[j] = target
        elif p.degree == -1:
            if not resolve_free:
                raise DegeneratePivot(j, N, k, "coefficient is free (zero pivot)")
            c[j] = anchor_value(j)
            resolved.append(j)
        else:
            raise DegeneratePivot(j, N, k, f"order-{order} equation is inconsistent")
    return PainleveSeries(N, k, tuple(c[1 : M + 1]), tuple(resolved))


def painleve_moment(N: int, k: int) -> Fraction:
    """Moment from c_1..c_2k: det series = E|Lambda(1)|^{2k} * exp(sum c_j t^j / j)."""
    if k == 0:
        return Fraction(1)
    series = painleve_coefficients(N, k, 2 * k)
    order = 2 * k
    exponent = TaylorSeries.univariate([0] + [series.c(j) / j for j in range(1, order + 1)])
    det = series_exp(exponent) * charpoly_moment(N, k)
    return Fraction(laguerre_k_extract(det, N, k))


def painleve_f_poly(k: int, workers: int | None = None) -> RatPolynomial:
    """f(N,k) with the Painleve recursion as the evaluation engine."""
    return f_ratio(k, "painleve", workers)


def painleve_moment_poly(k: int, workers: int | None = None) -> RatPolynomial:
    return deriv_moment_poly(k, "painleve", workers)
