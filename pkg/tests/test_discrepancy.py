import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equidist.analysis import centered_indicator, sawtooth, zero_function
from equidist.discrepancy import (
    counting_function,
    discrepancies,
    erdos_turan_bound,
    extreme_discrepancy,
    koksma_bound,
    schmidt_reference,
    star_discrepancy,
    weyl_sum,
    weyl_sum_closed_form,
)
from equidist.sequences import PointSet, kronecker_sequence

from .oracles import brute_extreme, brute_star

F = Fraction
EIGHTHS = PointSet.from_fractions([F(1, 8), F(3, 8), F(5, 8), F(7, 8)])

points = st.lists(st.floats(0, 1, exclude_max=True), min_size=1, max_size=40)
rational_points = st.lists(
    st.fractions(min_value=0, max_value=1, max_denominator=64).filter(lambda x: x < 1),
    min_size=1, max_size=12,
)


def test_counting_function_half_open():
    assert counting_function(PointSet([0.25, 0.75]), 0, 0.5) == 1
    assert counting_function(PointSet([0.5]), 0.5, 1) == 1
    assert counting_function(PointSet([0.1, 0.2, 0.3]), 0.2, 0.3) == 1
    with pytest.raises(ValueError):
        counting_function(PointSet([0.1]), 0.5, 0.5)


def test_discrepancy_examples():
    assert star_discrepancy(PointSet([0.5])) == 0.5
    assert star_discrepancy(PointSet([0.0])) == 1.0
    assert star_discrepancy(EIGHTHS) == 0.125
    assert extreme_discrepancy(PointSet([0.5])) == 1.0
    assert extreme_discrepancy(EIGHTHS) == 0.25
    assert brute_star(EIGHTHS.exact) == F(1, 8)
    assert brute_extreme(EIGHTHS.exact) == F(1, 4)


@given(rational_points)
@settings(max_examples=150, deadline=None)
def test_closed_forms_equal_brute_force_exactly(xs):
    P = PointSet.from_fractions(xs)
    assert star_discrepancy(P, exact=True) == brute_star(xs)
    assert extreme_discrepancy(P, exact=True) == brute_extreme(xs)


@given(points)
@settings(max_examples=150, deadline=None)
def test_two_sided_bound_and_lower_bound(xs):
    r = discrepancies(PointSet(xs))
    assert r.star <= r.extreme <= 2 * r.star
    assert r.star >= 1 / (2 * r.N) - 1e-15


@pytest.mark.parametrize("N", [1, 2, 7, 64])
def test_centered_equidistant_attains_lower_bound(N):
    P = PointSet.from_fractions(F(2 * k + 1, 2 * N) for k in range(N))
    assert star_discrepancy(P, exact=True) == F(1, 2 * N)


@given(points, st.randoms())
@settings(max_examples=50, deadline=None)
def test_permutation_invariance(xs, rnd):
    ys = list(xs)
    rnd.shuffle(ys)
    a, b = discrepancies(PointSet(xs)), discrepancies(PointSet(ys))
    assert (a.star, a.extreme) == (b.star, b.extreme)


def test_weyl_sum_examples():
    assert abs(weyl_sum(PointSet([0.5, 0.0]), 1).value) < 1e-15
    assert weyl_sum(kronecker_sequence(F(1, 3), 3), 3).value == pytest.approx(3)
    target = cmath.exp(2j * math.pi / 3)
    assert weyl_sum(kronecker_sequence(F(1, 3), 4), 1).value == pytest.approx(target)
    with pytest.raises(ValueError):
        weyl_sum(PointSet([0.1]), 0)


def test_weyl_closed_form_examples():
    assert abs(weyl_sum_closed_form(F(1, 2), 1, 2)) < 1e-15
    assert abs(weyl_sum_closed_form(F(1, 4), 1, 4)) < 1e-15
    assert weyl_sum_closed_form(F(1, 3), 1, 4) == pytest.approx(cmath.exp(2j * math.pi / 3))
    assert weyl_sum_closed_form(F(1, 3), 3, 7) == 7


@given(st.fractions(0, 1, max_denominator=10**12), st.integers(-50, 50).filter(bool), st.integers(1, 500))
@settings(max_examples=100, deadline=None)
def test_weyl_closed_form_matches_direct(x, h, N):
    P = kronecker_sequence(x, N)
    direct = weyl_sum(P, h)
    assert abs(direct.value) <= N + 1e-9
    assert abs(direct.value - weyl_sum_closed_form(x, h, N)) <= 1e-10


def test_erdos_turan_examples():
    assert erdos_turan_bound(PointSet([0.0] * 5), 1) == pytest.approx(6.0)
    N = 16
    P = PointSet([k / N for k in range(N)])
    for H in (1, 5, 15):
        assert erdos_turan_bound(P, H) == pytest.approx(3 / H, abs=1e-12)
    assert erdos_turan_bound(EIGHTHS, 3) >= 0.125


@given(points, st.sampled_from([1, 2, 4, 16, 64]))
@settings(max_examples=100, deadline=None)
def test_erdos_turan_dominates_star(xs, H):
    P = PointSet(xs)
    assert erdos_turan_bound(P, H) >= star_discrepancy(P)


def test_koksma_examples():
    lhs, rhs = koksma_bound(sawtooth(), EIGHTHS, exact=True)
    assert lhs == 0 and rhs == F(1, 8)
    lhs, rhs = koksma_bound(centered_indicator(0, F(1, 2)), PointSet.from_fractions([F(1, 4)]), exact=True)
    # D* of the single point 1/4 is 3/4
    assert lhs == F(1, 2) and rhs == 2 * F(3, 4)
    assert koksma_bound(zero_function(), EIGHTHS, exact=True) == (0, 0)


def test_schmidt_reference():
    assert schmidt_reference(3) == pytest.approx(0.3662, abs=1e-4)
    assert schmidt_reference(100) == pytest.approx(0.046052, abs=1e-6)
    assert schmidt_reference(10**6) == pytest.approx(1.3816e-5, rel=1e-4)
