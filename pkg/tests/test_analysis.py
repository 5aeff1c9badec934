import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equidist.analysis import (
    GridBudgetExceeded,
    PeriodicBVFunction,
    QuadratureSpec,
    centered_indicator,
    dilated_sum,
    dilated_sum_l2_exact,
    evaluate,
    evaluate_array,
    fourier_coefficients,
    fourier_partial_sum,
    l2_maximal_norm,
    maximal_partial_sum,
    product_integral,
    rm_bound,
    rm_check,
    sawtooth,
    zero_function,
)

from .strategies import bv_functions

F = Fraction
EXACT = QuadratureSpec("exact-piecewise")


def test_sawtooth_basics():
    f = sawtooth()
    assert evaluate(f, 0.25) == -0.25
    assert evaluate(f, 1.25) == -0.25
    assert evaluate(f, 0) == F(-1, 2)
    assert f.mean() == 0
    assert f.variation() == 1
    assert f.second_moment() == F(1, 12)


def test_centered_indicator_basics():
    f = centered_indicator(0, F(1, 2))
    assert evaluate(f, 0.25) == 0.5
    assert evaluate(f, 0.75) == -0.5
    assert evaluate(f, 0.5) == -0.5
    assert evaluate(f, 0) == -0.5  # open interval at a
    assert f.mean() == 0
    assert f.variation() == 2
    g = centered_indicator(F(1, 4), F(2, 3))
    assert g.mean() == 0 and g.variation() == 2
    with pytest.raises(ValueError):
        centered_indicator(F(1, 2), F(1, 2))


@given(bv_functions())
@settings(max_examples=60, deadline=None)
def test_evaluate_array_matches_scalar(f):
    xs = np.array([k / 64 for k in range(64)] + [0.123, 0.999])  # dyadic, so floats are exact
    expected = [float(evaluate(f, F(x))) for x in xs]
    assert np.allclose(evaluate_array(f, xs), expected, atol=1e-12)


def test_fourier_closed_forms():
    a, b = fourier_coefficients(sawtooth(), 50)
    j = np.arange(1, 51)
    assert np.allclose(a, 0, atol=1e-15)
    assert np.allclose(b, -1 / (np.pi * j), atol=1e-15)
    a, b = fourier_coefficients(zero_function(), 10)
    assert not a.any() and not b.any()
    a, b = fourier_coefficients(centered_indicator(0, F(1, 2)), 40)
    assert np.allclose(a[1::2], 0, atol=1e-14)  # even j
    assert np.allclose(np.abs(b[0::2]), 2 / (np.pi * j[:40:2]), atol=1e-14)


@given(bv_functions())
@settings(max_examples=30, deadline=None)
def test_fourier_against_quadrature(f):
    G = 1 << 14
    x = (np.arange(G) + 0.5) / G
    y = evaluate_array(f, x)
    a, b = fourier_coefficients(f, 5)
    for j in range(1, 6):
        # midpoint rule is second order on each smooth piece, first order at jumps
        assert a[j - 1] == pytest.approx(2 * np.mean(y * np.cos(2 * np.pi * j * x)), abs=1e-3)
        assert b[j - 1] == pytest.approx(2 * np.mean(y * np.sin(2 * np.pi * j * x)), abs=1e-3)


@given(bv_functions())
@settings(max_examples=30, deadline=None)
def test_fourier_decay_bounded_by_variation(f):
    J = 1 << 12
    a, b = fourier_coefficients(f, J)
    j = np.arange(1, J + 1)
    assert np.all(j * np.maximum(np.abs(a), np.abs(b)) <= float(f.variation()) + 1e-9)


def test_parseval_sawtooth():
    J = 10**4
    a, b = fourier_coefficients(sawtooth(), J)
    assert np.sum(a * a + b * b) / 2 == pytest.approx(1 / 12, abs=1e-4)


@pytest.mark.parametrize("a,b,n", [(1.0, 0.0, 1), (0.3, -2.0, 5), (1.5, 1.5, 17)])
def test_trigonometric_second_moment_is_half_sum_of_squares(a, b, n):
    # the midpoint rule on G > 2n points integrates this trigonometric polynomial exactly
    G = 256
    x = (np.arange(G) + 0.5) / G
    val = np.mean((a * np.cos(2 * np.pi * n * x) + b * np.sin(2 * np.pi * n * x)) ** 2)
    assert val == pytest.approx((a * a + b * b) / 2, abs=1e-12)


def test_fourier_partial_sums():
    assert fourier_partial_sum(sawtooth(), 1, 0.25) == pytest.approx(-1 / math.pi)
    assert fourier_partial_sum(zero_function(), 5, 0.3) == 0
    for x in (0.1, 0.3, 0.77):
        assert fourier_partial_sum(sawtooth(), 1 << 10, x) == pytest.approx(x - 0.5, abs=1e-2)
    g = centered_indicator(F(1, 4), F(3, 4))
    assert fourier_partial_sum(g, 1 << 10, 0.5) == pytest.approx(0.5, abs=1e-2)


def test_dilated_sums():
    f = sawtooth()
    assert dilated_sum(f, (1,), (1,), 0.25, 1) == -0.25
    assert dilated_sum(f, (1, 2), (1, 1), 0.25, 2) == -0.25
    assert dilated_sum(f, (3, 5, 9), (0, 0, 0), 0.123, 3) == 0
    assert maximal_partial_sum(f, (7,), (2,), 0.1, 1) == pytest.approx(abs(2 * (0.7 - 0.5)))
    assert maximal_partial_sum(f, (1, 2), (1, -1), 0.25, 2) == 0.25
    with pytest.raises(ValueError):
        dilated_sum(f, (1, 2), (1,), 0.25, 2)


@given(st.lists(st.integers(1, 10**6), min_size=1, max_size=12, unique=True),
       st.fractions(0, 1, max_denominator=10**6))
@settings(max_examples=50, deadline=None)
def test_maximal_partial_sum_monotone_and_dominates(terms, x):
    f = sawtooth()
    D = sorted(terms)
    c = [1] * len(D)
    vals = [maximal_partial_sum(f, D, c, x, N) for N in range(1, len(D) + 1)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert vals[-1] >= abs(dilated_sum(f, D, c, x, len(D)))


def test_product_integral_matches_second_moment():
    g = centered_indicator(0, F(1, 2))
    assert product_integral(g, 1, g, 1) == F(1, 4)
    assert product_integral(sawtooth(), 1, sawtooth(), 1) == F(1, 12)


def test_l2_maximal_examples():
    f = sawtooth()
    assert l2_maximal_norm(f, (1,), (1,), 1, EXACT) == pytest.approx(math.sqrt(1 / 12), abs=1e-15)
    assert l2_maximal_norm(f, (1,), (1,), 1) == pytest.approx(math.sqrt(1 / 12), abs=1e-6)
    assert l2_maximal_norm(f, (1, 2, 3), (0, 0, 0), 3) == 0
    exact = l2_maximal_norm(f, (1, 2), (1, 1), 2, EXACT)
    assert exact >= 0.5
    assert dilated_sum_l2_exact(f, (1, 2), (1, 1), 2) == F(1, 4)
    assert l2_maximal_norm(f, (1, 2), (1, 1), 2) == pytest.approx(exact, abs=1e-5)


@given(bv_functions(max_pieces=3),
       st.lists(st.integers(1, 12), min_size=1, max_size=4, unique=True),
       st.lists(st.integers(-3, 3), min_size=4, max_size=4))
@settings(max_examples=25, deadline=None)
def test_grid_maximal_norm_tracks_exact(f, terms, c):
    D = sorted(terms)
    c = c[: len(D)]
    exact = l2_maximal_norm(f, D, c, len(D), EXACT)
    grid = l2_maximal_norm(f, D, c, len(D), QuadratureSpec("grid", 1 << 18))
    assert grid == pytest.approx(exact, abs=2e-2)
    assert exact ** 2 >= float(dilated_sum_l2_exact(f, D, c, len(D))) - 1e-12


def test_grid_budget():
    with pytest.raises(GridBudgetExceeded):
        l2_maximal_norm(sawtooth(), (1, 10**6), (1, 1), 2)
    with pytest.raises(GridBudgetExceeded):
        l2_maximal_norm(sawtooth(), (1, 1000), (1, 1), 2, QuadratureSpec("grid", 1 << 10))
    with pytest.raises(ValueError):
        QuadratureSpec("grid", 16)


def test_rm_bound_examples():
    assert rm_bound(1, [1]) == 4
    assert rm_bound(4, [1, 1, 1, 1]) == 64
    assert rm_bound(8, [1] + [0] * 7) == 25


def test_rm_check_examples():
    lhs, rhs = rm_check((5,), (1.5,))
    # max over one term is the term itself: int 2 c^2 cos^2 = c^2
    assert lhs == pytest.approx(2.25, rel=1e-9)
    lhs, rhs = rm_check((1, 2, 3, 4), (1, 1, 1, 1))
    assert lhs <= 64 and rhs == 64
    assert rm_check((1, 2), (0, 0)) == (0.0, 0.0)
    with pytest.raises(ValueError):
        rm_check((1, 1), (1, 1))


def test_json_roundtrip():
    f = centered_indicator(F(1, 3), F(3, 4))
    g = PeriodicBVFunction.from_json(f.to_json())
    assert g == f
    obj = __import__("json").loads(sawtooth().to_json())
    assert set(obj) == {"breakpoints", "slopes", "values"}
