"""The mod (4k-1) factorisation of the derivative moment, checked in Z_p[N]."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .algebra import RatPolynomial
from .errors import NotPrime, ResidualPDenominator, ValidationError
from .moments import charpoly_moment_poly, deriv_moment_poly

__all__ = ["ModPolynomial", "is_prime", "clear_and_reduce", "theorem_rhs", "verify_mod_theorem", "ModReport"]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class ModPolynomial:
    """Polynomial in N over Z_p, ascending coefficients in [0, p), no trailing zeros."""

    __slots__ = ("p", "coefficients")

    def __init__(self, p: int, coefficients=()):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        c = [int(a) % p for a in coefficients]
        while c and c[-1] == 0:
            c.pop()
        self.p = p
        self.coefficients = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __eq__(self, other):
        if not isinstance(other, ModPolynomial):
            return NotImplemented
        return self.p == other.p and self.coefficients == other.coefficients

    def __hash__(self):
        return hash((self.p, self.coefficients))

    def __mul__(self, other):
        if isinstance(other, int):
            return ModPolynomial(self.p, (a * other for a in self.coefficients))
        if other.p != self.p:
            raise ValidationError("moduli differ")
        out = [0] * max(0, len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return ModPolynomial(self.p, out)

    __rmul__ = __mul__

    def __call__(self, x: int) -> int:
        acc = 0
        for a in reversed(self.coefficients):
            acc = (acc * x + a) % self.p
        return acc

    def __repr__(self):
        return f"ModPolynomial(p={self.p}, {list(self.coefficients)})"

    def __str__(self):
        if not self.coefficients:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            a = self.coefficients[i]
            if a:
                mono = "" if i == 0 else ("N" if i == 1 else f"N^{i}")
                terms.append(mono if a == 1 and mono else f"{a}{'*' + mono if mono else ''}")
        return " + ".join(terms) + f"  (mod {self.p})"


def _reduce_rational(a, p: int) -> int:
    if a.denominator % p == 0:
        raise ResidualPDenominator(f"coefficient {a} keeps a factor {p} in its denominator")
    return a.numerator * pow(a.denominator, -1, p) % p


def clear_and_reduce(poly: RatPolynomial, p: int) -> ModPolynomial:
    """Multiply by p (cancelling one power of p in the denominators), then reduce mod p."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    scaled = poly * p
    return ModPolynomial(p, (_reduce_rational(a, p) for a in scaled.coefficients))


def _modulus_for(k: int) -> int:
    if not isinstance(k, int) or k < 1:
        raise ValidationError("k must be a positive integer")
    p = 4 * k - 1
    if not is_prime(p):
        raise NotPrime(f"4k-1 = {p} is not prime")
    return p


def theorem_rhs(k: int) -> ModPolynomial:
    """(-2) (N-2k+1)...N / ((k-1)!)^2 times E|Lambda(1)|^{2k}, reduced mod 4k-1."""
    p = _modulus_for(k)
    falling = ModPolynomial(p, (1,))
    for j in range(2 * k):
        falling = falling * ModPolynomial(p, (-j, 1))
    scalar = -2 * pow(math.factorial(k - 1) ** 2, -1, p)
    moment = ModPolynomial(p, (_reduce_rational(a, p) for a in charpoly_moment_poly(k).coefficients))
    return falling * moment * scalar


@dataclass(frozen=True)
class ModReport:
    k: int
    p: int
    holds: bool
    lhs: ModPolynomial
    rhs: ModPolynomial
    denominator_p_power: int


def p_adic_valuation(n: int, p: int) -> int:
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def verify_mod_theorem(k: int, method: str = "painleve", workers: int | None = None) -> ModReport:
    """Compare p * moment-polynomial and the factored right side coefficientwise in Z_p[N].

    Also records the exact power of p in the lcm of the moment polynomial's
    coefficient denominators.  No exponent reduction (N^p = N) is ever applied.
    """
    p = _modulus_for(k)
    moment = deriv_moment_poly(k, method, workers)
    power = p_adic_valuation(moment.denominator_lcm(), p)
    lhs = clear_and_reduce(moment, p)
    rhs = theorem_rhs(k)
    return ModReport(k, p, lhs == rhs, lhs, rhs, power)
