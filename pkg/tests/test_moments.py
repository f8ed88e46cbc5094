import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cue_moments.algebra import RatPolynomial
from cue_moments.errors import QEqualsOne, ValidationError
from cue_moments.moments import (
    b_k_leading,
    charpoly_moment,
    charpoly_moment_poly,
    deriv_moment,
    deriv_moment_general_x,
    deriv_moment_laguerre_k,
    deriv_moment_laguerre_N,
    deriv_moment_poly,
    deriv_moment_sumofdets,
    f_ratio,
    roots_of_f,
    weak_compositions,
)

from oracles import lambda_prime, lambda_value, weyl_average

N = RatPolynomial.variable()


def test_charpoly_moment_examples():
    assert charpoly_moment(2, 1) == 3
    assert charpoly_moment(7, 0) == 1
    assert charpoly_moment(1, 3) == 20


@pytest.mark.parametrize("k", range(0, 5))
def test_charpoly_forms_agree(k):
    p = charpoly_moment_poly(k)
    assert p.degree == k * k
    for n in range(1, 12):
        assert p(n) == charpoly_moment(n, k)


@pytest.mark.parametrize("N_, k", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_charpoly_moment_against_weyl_integral(N_, k):
    brute = weyl_average(N_, lambda z: np.abs(lambda_value(z, 1)) ** (2 * k))
    assert brute == pytest.approx(float(charpoly_moment(N_, k)), rel=1e-10)


@given(st.integers(0, 7), st.integers(1, 5))
def test_weak_compositions(total, parts):
    comps = list(weak_compositions(total, parts))
    assert len(comps) == math.comb(total + parts - 1, parts - 1)
    assert len(set(comps)) == len(comps)
    assert all(sum(c) == total and min(c) >= 0 for c in comps)
    # colex: compare reversed tuples
    assert [c[::-1] for c in comps] == sorted(c[::-1] for c in comps)


def test_engine_examples():
    assert deriv_moment_sumofdets(2, 1) == 5
    assert deriv_moment_sumofdets(4, 0) == 1
    assert deriv_moment_sumofdets(5, 1) == 55
    assert deriv_moment_laguerre_k(2, 1) == 5
    assert deriv_moment_laguerre_k(4, 2) == deriv_moment_sumofdets(4, 2)
    assert deriv_moment_laguerre_N(1, 1) == 1
    assert deriv_moment_laguerre_N(2, 1) == 5
    assert deriv_moment_laguerre_N(3, 2) == deriv_moment_sumofdets(3, 2)
    assert deriv_moment_general_x(2, 1, 4) == 17
    assert deriv_moment_general_x(1, 1, Fraction(7, 3)) == 1
    assert deriv_moment_general_x(2, 0, Fraction(1, 2)) == 1


@pytest.mark.parametrize("N_", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("q", [Fraction(1), Fraction(1, 4), Fraction(4)])
def test_moments_against_weyl_integral(N_, k, q):
    x = math.sqrt(q)
    brute = weyl_average(N_, lambda z: np.abs(lambda_prime(z, x)) ** (2 * k), points=20)
    method = "sumofdets" if q == 1 else "general_x"
    assert brute == pytest.approx(float(deriv_moment(N_, k, q, method)), rel=1e-10)


def test_small_N_below_2k_is_allowed():
    for k in (2, 3):
        for n in range(1, 2 * k):
            assert deriv_moment_sumofdets(n, k) == deriv_moment_laguerre_N(n, k)


def test_symbolic_laguerre_k():
    assert deriv_moment_laguerre_k(N, 1) == N * (N + 1) * (2 * N + 1) / 6
    assert deriv_moment_laguerre_k(N, 2) == deriv_moment_poly(2)


def test_moment_polynomials():
    assert deriv_moment_poly(1) == N * (N + 1) * (2 * N + 1) / 6
    assert deriv_moment_poly(1).leading == Fraction(1, 3)
    for k in range(1, 5):
        p = deriv_moment_poly(k)
        assert p.degree == k * k + 2 * k
        f = f_ratio(k)
        assert f.degree == 2 * k and f[0] == 0


def test_polynomial_methods_agree():
    for k in (1, 2, 3):
        assert deriv_moment_poly(k, "sumofdets") == deriv_moment_poly(k, "laguerre_k") == deriv_moment_poly(k, "painleve")


def test_method_validation():
    with pytest.raises(QEqualsOne):
        deriv_moment_general_x(3, 1, 1)
    with pytest.raises(ValidationError):
        deriv_moment(3, 1, Fraction(1, 2), "laguerre_k")
    with pytest.raises(ValidationError):
        deriv_moment(3, 1, 1, "nonsense")
    with pytest.raises(ValidationError):
        deriv_moment_poly(2, "laguerre_N")


def test_general_x_approaches_unit_circle_value():
    target = float(deriv_moment_laguerre_k(3, 1))
    for sign in (1, -1):
        gaps = [abs(float(deriv_moment_general_x(3, 1, 1 + sign * Fraction(1, 10**i))) - target)
                for i in range(1, 5)]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-2
    # the moment is a polynomial in q, so it is continuous through q = 1
    assert float(deriv_moment_general_x(3, 1, 1 + Fraction(1, 10**8))) == pytest.approx(target, rel=1e-6)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_b_k_matches_leading_coefficient(k):
    assert b_k_leading(k) == deriv_moment_poly(k).leading


def test_b_k_small_values():
    assert b_k_leading(1) == Fraction(1, 3)
    assert b_k_leading(3) == charpoly_moment_poly(3).leading * Fraction(6648, 388080)


def test_roots_k1():
    roots, residuals = roots_of_f(1)
    assert roots == [-0.5, 0]
    assert max(residuals) < 1e-10


@pytest.mark.parametrize("k", [2, 3, 4])
def test_roots_structure(k):
    roots, residuals = roots_of_f(k)
    assert len(roots) == 2 * k
    real = [z for z in roots if z.imag == 0]
    assert len(real) == 2 and 0 in real
    assert sorted((z.real, z.imag) for z in roots) == sorted((z.real, -z.imag) for z in roots)
    assert max(residuals) < 1e-10
