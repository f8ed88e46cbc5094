"""Exact determinants over Q, Q[N] and truncated series rings."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .algebra import RatPolynomial, TaylorSeries
from .errors import DimensionMismatch, MixedEntryKinds

__all__ = ["determinant", "column_identity_check", "entry_kind"]


def entry_kind(x) -> str:
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return "rational"
    if isinstance(x, RatPolynomial):
        return "polynomial"
    if isinstance(x, TaylorSeries):
        return "series"
    raise MixedEntryKinds(f"unsupported matrix entry {x!r}")


def _bareiss_int(a: list[list[int]]) -> int:
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * pivot - aik * rowk[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def _det_rational(m) -> Fraction | int:
    n = len(m)
    scales = []
    rows = []
    for row in m:
        lcm = math.lcm(*(Fraction(x).denominator for x in row))
        scales.append(lcm)
        rows.append([int(Fraction(x) * lcm) for x in row])
    d = _bareiss_int(rows)
    denom = math.prod(scales)
    return d if denom == 1 else Fraction(d, denom)


def _det_minors(m, one):
    """Laplace expansion along rows, memoised over column subsets.

    ``minors[S]`` is the determinant of the leading ``|S|`` rows restricted to
    the columns in bitmask ``S``.  Division-free, so it works over any
    commutative ring; cost is O(2^n n) ring products.
    """
    n = len(m)
    minors = {0: one}
    for r in range(n):
        row = m[r]
        nxt = {}
        for mask, val in minors.items():
            if not val:
                continue
            # sign of inserting column c = (-1)^(number of used columns above c)
            for c in range(n):
                bit = 1 << c
                if mask & bit or not row[c]:
                    continue
                term = row[c] * val
                if bin(mask >> (c + 1)).count("1") % 2:
                    term = -term
                key = mask | bit
                nxt[key] = nxt[key] + term if key in nxt else term
        minors = nxt
    return minors.get((1 << n) - 1, one * 0)


def determinant(m: Sequence[Sequence]):
    """Exact determinant; the 0x0 determinant is 1.

    Rational matrices go through integer Bareiss elimination after clearing row
    denominators.  Polynomial and series matrices use the division-free minor
    expansion above.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise DimensionMismatch("matrix must be square")
    if n == 0:
        return 1
    kinds = {entry_kind(x) for row in m for x in row}
    if len(kinds) > 1:
        raise MixedEntryKinds(f"entries mix {sorted(kinds)}")
    kind = kinds.pop()
    if kind == "rational":
        return _det_rational(m)
    if kind == "polynomial":
        return _det_minors(m, RatPolynomial((1,)))
    orders = {x.orders for row in m for x in row}
    if len(orders) != 1:
        raise DimensionMismatch("series entries must share truncation orders")
    (orders,) = orders
    return _det_minors(m, TaylorSeries.constant(Fraction(1), orders))


def column_identity_check(A: Sequence, a: Sequence[Sequence]):
    """Both sides of the column identity for ``k = len(a)`` columns of length k.

    left  = det(A, a2-a1, a3-a2, ..., ak-a(k-1))
    right = sum_i det(a1, ..., A (in slot i), ..., ak)
    """
    k = len(a)
    if len(A) != k or any(len(col) != k for col in a):
        raise DimensionMismatch("need k column vectors of length k")

    def det_cols(cols):
        return determinant([[cols[j][i] for j in range(k)] for i in range(k)])

    diffs = [list(A)] + [[a[j][i] - a[j - 1][i] for i in range(k)] for j in range(1, k)]
    left = det_cols(diffs)
    right = 0
    for slot in range(k):
        cols = [list(c) for c in a]
        cols[slot] = list(A)
        right += det_cols(cols)
    return left, right
