"""Exact scalars, polynomials in ``N`` and truncated power series.

Rationals are :class:`fractions.Fraction`, which is always stored reduced with a
positive denominator, so equality is structural.  Polynomials and series
accept any coefficient ring closed under ``+``, ``-``, ``*`` that has a falsy
zero: ``int``, ``Fraction`` and :class:`RatPolynomial` itself.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DuplicateAbscissa, NonzeroRemainder, TruncationExceeded, ValidationError

__all__ = [
    "Fraction",
    "RatPolynomial",
    "TaylorSeries",
    "generalized_binomial",
    "lagrange_interpolate",
    "exact_divide",
    "series_multiply",
    "series_exp",
    "series_coefficient",
    "format_rational",
    "parse_rational",
    "polynomial_to_json",
    "polynomial_from_json",
]


def _as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"not an exact rational: {value!r}")


class RatPolynomial:
    """Dense univariate polynomial in ``N`` with rational coefficients.

    ``coefficients[i]`` multiplies ``N**i``.  Trailing zeros are stripped, so the
    zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("_c",)

    def __init__(self, coefficients: Iterable = ()):
        c = [_as_rational(a) for a in coefficients]
        while c and not c[-1]:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def variable(cls) -> "RatPolynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, value) -> "RatPolynomial":
        return cls((value,))

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def leading(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def __getitem__(self, i: int) -> Fraction:
        return self._c[i] if 0 <= i < len(self._c) else Fraction(0)

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, RatPolynomial):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == RatPolynomial((other,))._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return f"RatPolynomial({[format_rational(a) for a in self._c]})"

    def __str__(self):
        if not self._c:
            return "0"
        terms = []
        for i, a in enumerate(self._c):
            if not a:
                continue
            mono = "" if i == 0 else ("N" if i == 1 else f"N^{i}")
            if mono and a == 1:
                terms.append(mono)
            elif mono and a == -1:
                terms.append("-" + mono)
            else:
                terms.append(format_rational(a) + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ")

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return RatPolynomial((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._c, o._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return RatPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return RatPolynomial(-a for a in self._c)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatPolynomial(a * other for a in self._c) if other else RatPolynomial()
        if not isinstance(other, RatPolynomial):
            return NotImplemented
        if not self._c or not other._c:
            return RatPolynomial()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a:
                for j, b in enumerate(other._c):
                    out[i + j] += a * b
        return RatPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatPolynomial(a / other for a in self._c)
        return NotImplemented

    def __pow__(self, e: int):
        result = RatPolynomial((1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0
        for a in reversed(self._c):
            acc = acc * x + a
        return acc

    def divmod(self, other: "RatPolynomial") -> tuple["RatPolynomial", "RatPolynomial"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._c)
        dlead = other._c[-1]
        dd = other.degree
        q = [Fraction(0)] * max(0, len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            coef = rem[i] / dlead
            if coef:
                q[i - dd] = coef
                for j, b in enumerate(other._c):
                    rem[i - dd + j] -= coef * b
        return RatPolynomial(q), RatPolynomial(rem)

    def denominator_lcm(self) -> int:
        return math.lcm(*(a.denominator for a in self._c)) if self._c else 1


def generalized_binomial(top, r: int):
    """``top (top-1) ... (top-r+1) / r!`` for integer or polynomial ``top``.

    The falling-factorial form is used for every integer, so negative tops give
    the signed values needed by negative-exponent binomial series.
    """
    if r < 0:
        raise ValidationError("lower index must be non-negative")
    if isinstance(top, int):
        if top >= 0:
            return math.comb(top, r)
        num = 1
        for i in range(r):
            num *= top - i
        return num // math.factorial(r)
    if isinstance(top, Fraction):
        num = Fraction(1)
        for i in range(r):
            num *= top - i
        return num / math.factorial(r)
    if isinstance(top, RatPolynomial):
        acc = RatPolynomial((1,))
        for i in range(r):
            acc = acc * (top - i)
        return acc / math.factorial(r)
    raise TypeError(f"unsupported binomial top {top!r}")


def lagrange_interpolate(points: Sequence[tuple[int, object]]) -> RatPolynomial:
    """Unique polynomial of degree < len(points) through the points.

    Uses Newton divided differences, then expands the Newton form.
    """
    if not points:
        raise ValidationError("need at least one point")
    xs = [_as_rational(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa("abscissae must be pairwise distinct")
    dd = [_as_rational(y) for _, y in points]
    n = len(xs)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level])
    coeffs = [dd[-1]]
    for i in range(n - 2, -1, -1):
        # coeffs <- coeffs * (N - xs[i]) + dd[i]
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for j, c in enumerate(coeffs):
            nxt[j + 1] += c
            nxt[j] -= c * xs[i]
        nxt[0] += dd[i]
        coeffs = nxt
    return RatPolynomial(coeffs)


def exact_divide(num: RatPolynomial, den: RatPolynomial) -> RatPolynomial:
    q, r = num.divmod(den)
    if r:
        raise NonzeroRemainder(f"division leaves remainder {r}")
    return q


class TaylorSeries:
    """Truncated power series in one or two variables.

    ``orders[v]`` is the highest retained exponent of variable ``v``.  Only
    nonzero coefficients are stored; anything beyond the orders is never kept.
    """

    __slots__ = ("orders", "coeffs")

    def __init__(self, orders: Sequence[int], coeffs: Mapping[tuple, object] | None = None):
        self.orders = tuple(int(o) for o in orders)
        if not 1 <= len(self.orders) <= 2 or min(self.orders) < 0:
            raise ValidationError("series need 1 or 2 variables with non-negative orders")
        self.coeffs = {}
        for e, c in (coeffs or {}).items():
            e = (e,) if isinstance(e, int) else tuple(e)
            if len(e) != len(self.orders):
                raise ValidationError("exponent arity does not match variable count")
            if c and all(x <= o for x, o in zip(e, self.orders)):
                self.coeffs[e] = c

    @classmethod
    def univariate(cls, coefficients: Sequence, order: int | None = None) -> "TaylorSeries":
        order = len(coefficients) - 1 if order is None else order
        return cls((order,), {(i,): c for i, c in enumerate(coefficients) if i <= order})

    @classmethod
    def constant(cls, value, orders: Sequence[int]) -> "TaylorSeries":
        return cls(orders, {(0,) * len(orders): value})

    @property
    def nvars(self) -> int:
        return len(self.orders)

    def coefficient(self, exponents):
        e = (exponents,) if isinstance(exponents, int) else tuple(exponents)
        if len(e) != self.nvars:
            raise ValidationError("exponent arity does not match variable count")
        if any(x < 0 for x in e):
            raise ValidationError("negative exponent")
        if any(x > o for x, o in zip(e, self.orders)):
            raise TruncationExceeded(f"exponent {e} beyond truncation {self.orders}")
        return self.coeffs.get(e, 0)

    def to_list(self):
        if self.nvars != 1:
            raise ValidationError("to_list needs a univariate series")
        return [self.coeffs.get((i,), 0) for i in range(self.orders[0] + 1)]

    def truncate(self, orders: Sequence[int]) -> "TaylorSeries":
        return TaylorSeries(orders, self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TaylorSeries):
            return NotImplemented
        return self.orders == other.orders and self.coeffs == other.coeffs

    def __repr__(self):
        return f"TaylorSeries(orders={self.orders}, coeffs={self.coeffs!r})"

    def _common(self, other: "TaylorSeries") -> tuple[int, ...]:
        if not isinstance(other, TaylorSeries):
            raise TypeError("expected TaylorSeries")
        if other.nvars != self.nvars:
            raise ValidationError("variable counts differ")
        return tuple(min(a, b) for a, b in zip(self.orders, other.orders))

    def __add__(self, other):
        if not isinstance(other, TaylorSeries):
            return self + TaylorSeries.constant(other, self.orders)
        orders = self._common(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return TaylorSeries(orders, out)

    __radd__ = __add__

    def __neg__(self):
        return TaylorSeries(self.orders, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TaylorSeries):
            return TaylorSeries(self.orders, {e: c * other for e, c in self.coeffs.items()})
        return series_multiply(self, other)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return TaylorSeries(self.orders, {e: c / scalar for e, c in self.coeffs.items()})


def series_multiply(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    orders = a._common(b)
    out: dict[tuple, object] = {}
    if a.nvars == 1:
        (oa,) = orders
        for (i,), x in a.coeffs.items():
            if i > oa:
                continue
            for (j,), y in b.coeffs.items():
                if i + j <= oa:
                    key = (i + j,)
                    out[key] = out[key] + x * y if key in out else x * y
    else:
        o1, o2 = orders
        for (i1, i2), x in a.coeffs.items():
            for (j1, j2), y in b.coeffs.items():
                e1, e2 = i1 + j1, i2 + j2
                if e1 <= o1 and e2 <= o2:
                    key = (e1, e2)
                    out[key] = out[key] + x * y if key in out else x * y
    return TaylorSeries(orders, out)


def series_exp(a: TaylorSeries) -> TaylorSeries:
    """``exp(a)`` for a series with zero constant term."""
    zero = (0,) * a.nvars
    if a.coeffs.get(zero):
        raise ValidationError("series_exp requires a zero constant term")
    if a.nvars == 1:
        (order,) = a.orders
        av = [a.coeffs.get((i,), 0) for i in range(order + 1)]
        ev = [Fraction(1)] + [0] * order
        # e' = a' e  =>  n e_n = sum_j j a_j e_{n-j}
        for n in range(1, order + 1):
            s = 0
            for j in range(1, n + 1):
                if av[j] and ev[n - j]:
                    s = s + j * av[j] * ev[n - j]
            ev[n] = s / n if s else 0
        return TaylorSeries.univariate(ev, order)
    result = TaylorSeries.constant(Fraction(1), a.orders)
    power = TaylorSeries.constant(Fraction(1), a.orders)
    for p in range(1, sum(a.orders) + 1):
        power = series_multiply(power, a) / p
        if not power:
            break
        result = result + power
    return result


def series_coefficient(a: TaylorSeries, exponents):
    return a.coefficient(exponents)


def format_rational(value) -> str:
    value = _as_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        return Fraction(int(num), int(den)) if sep else Fraction(int(num))
    except ValueError as exc:
        raise ValidationError(f"not a rational literal: {text!r}") from exc


def polynomial_to_json(p: RatPolynomial) -> str:
    return json.dumps([format_rational(a) for a in p.coefficients])


def polynomial_from_json(text: str) -> RatPolynomial:
    data = json.loads(text)
    if not isinstance(data, list) or not all(isinstance(s, str) for s in data):
        raise ValidationError("expected a JSON array of rational strings")
    return RatPolynomial(parse_rational(s) for s in data)

