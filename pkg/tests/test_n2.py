import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cue_moments.errors import ConvergenceConditionViolated, ValidationError
from cue_moments.moments import deriv_moment_sumofdets
from cue_moments.n2 import (
    comparison_triple,
    jensen_log_moment,
    u2_log_moment,
    u2_mean_zero_count,
    u2_moment_3f2,
    u2_moment_integer_formula_continued,
    u2_moment_real_formula_continued,
    u2_moment_real_k,
    u2_moment_sum,
)

from oracles import lambda_prime, weyl_average
from reference_values import N2_TRIPLES


def test_sum_examples():
    assert u2_moment_sum(1, 1) == 5
    assert u2_moment_sum(3, 0) == 5
    assert u2_moment_sum(0, Fraction(7, 2)) == 1


def test_3f2_examples():
    assert u2_moment_3f2(1, 1) == 5
    assert u2_moment_3f2(2, 1) == u2_moment_sum(2, 1)
    assert u2_moment_3f2(1, 0) == u2_moment_sum(1, 0) == 1


@pytest.mark.parametrize("k", range(0, 11))
def test_sum_equals_3f2(k):
    for q in (0, Fraction(1, 4), 1, 4):
        assert u2_moment_sum(k, q) == u2_moment_3f2(k, q)


@given(st.integers(0, 8), st.fractions(0, 10, max_denominator=10))
def test_catalan_at_zero_and_monotone_in_q(k, q):
    assert u2_moment_sum(k, 0) == Fraction(math.comb(2 * k, k), k + 1)
    assert u2_moment_sum(k, q) >= u2_moment_sum(k, 0)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_sum_against_weyl_integral(k):
    x = 0.7
    brute = weyl_average(2, lambda z: np.abs(lambda_prime(z, x)) ** (2 * k))
    assert brute == pytest.approx(float(u2_moment_sum(k, Fraction(49, 100))), rel=1e-11)


@pytest.mark.parametrize("k", range(1, 7))
def test_sum_matches_general_engine(k):
    assert u2_moment_sum(k, 1) == deriv_moment_sumofdets(2, k)


@pytest.mark.parametrize("k", range(1, 7))
@pytest.mark.parametrize("x", [1.0, 1.25, 2.0])
def test_real_k_formula_at_integers(k, x):
    exact = float(u2_moment_sum(k, Fraction(x) ** 2))
    assert u2_moment_real_k(k, x) == pytest.approx(exact, rel=1e-9)


def test_real_k_examples():
    assert u2_moment_real_k(1, 1) == pytest.approx(5.0, abs=1e-10)
    assert u2_moment_real_k(1.25, 1.8) == pytest.approx(27.5617, abs=5e-3)
    assert u2_moment_real_k(3, 1.25) == pytest.approx(713.203, abs=5e-3)


def test_real_k_domain():
    with pytest.raises(ValidationError):
        u2_moment_real_k(0.5, 0.9)
    with pytest.raises(ValidationError):
        u2_moment_real_k(-1.1, 1.0)
    with pytest.raises(ConvergenceConditionViolated):
        u2_moment_real_k(-1.5, 1.0)


def test_real_k_against_weyl_integral_above_one():
    # |Lambda'|^{2k} is not a trigonometric polynomial for fractional k, so use a fine grid
    x, k = 1.8, 1.25
    brute = weyl_average(2, lambda z: np.abs(lambda_prime(z, x)) ** (2 * k), points=400)
    assert brute == pytest.approx(u2_moment_real_k(k, x), rel=1e-6)


def test_continued_forms():
    integer_form = u2_moment_integer_formula_continued(0.75, 0.2)
    real_form = u2_moment_real_formula_continued(0.75, 0.2)
    assert integer_form.real == pytest.approx(1.0409, abs=5e-5)
    assert real_form == pytest.approx(N2_TRIPLES[(Fraction(3, 4), Fraction(1, 5))][2], abs=1e-5)
    g1 = u2_moment_integer_formula_continued(1.25, 1.8)
    assert abs(g1 - (14.4 - 0.04j)) < 0.05
    assert abs(g1 - u2_moment_real_k(1.25, 1.8)) > 1


def test_mean_zero_count_examples():
    assert u2_mean_zero_count(0) == 0
    assert u2_mean_zero_count(1) == pytest.approx(1.0, abs=1e-15)
    assert u2_mean_zero_count(1 / math.sqrt(2)) == pytest.approx((1 + math.pi / 2) / math.pi, rel=1e-14)


def test_mean_zero_count_nondecreasing():
    values = [u2_mean_zero_count(u) for u in np.linspace(0, 1, 1001)]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_log_moment_examples():
    assert u2_log_moment(0) == -0.5
    assert u2_log_moment(0.9) > u2_log_moment(0.1)


@pytest.mark.parametrize("r", [i / 10 for i in range(1, 10)])
def test_jensen_identity(r):
    assert u2_log_moment(r) == pytest.approx(jensen_log_moment(r), abs=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.3, 0.95))
def test_log_moment_against_weyl_average(r):
    # the log singularity only allows slow convergence, hence the loose tolerance
    brute = weyl_average(2, lambda z: np.log(np.abs(lambda_prime(z, r))), points=400, stagger=0.309)
    assert brute == pytest.approx(u2_log_moment(r), abs=2e-5)


def test_three_values_disagree_below_one():
    # Monte Carlo and both continued closed forms give three distinct values for |x| < 1
    t = comparison_triple(0.75, 0.2, 10**5, seed=0)
    assert t.monte_carlo == pytest.approx(1.01969, abs=4 * t.monte_carlo_error)
    values = [complex(t.monte_carlo), t.integer_formula, t.real_formula]
    for i in range(3):
        for j in range(i + 1, 3):
            assert abs(values[i] - values[j]) > 0.01
