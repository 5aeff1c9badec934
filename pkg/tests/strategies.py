"""Hypothesis strategies for random exact piecewise-affine functions."""

from fractions import Fraction

from hypothesis import strategies as st

from equidist.analysis import PeriodicBVFunction

small_q = st.fractions(min_value=-3, max_value=3, max_denominator=12)


@st.composite
def bv_functions(draw, max_pieces=5, point_values=True):
    inner = draw(st.lists(
        st.fractions(min_value=0, max_value=1, max_denominator=24).filter(lambda t: 0 < t < 1),
        max_size=max_pieces - 1, unique=True,
    ))
    bp = (Fraction(0), *sorted(inner), Fraction(1))
    m = len(bp) - 1
    slopes = tuple(draw(st.lists(small_q, min_size=m, max_size=m)))
    values = tuple(draw(st.lists(small_q, min_size=m, max_size=m)))
    pv = {}
    if point_values:
        for t in draw(st.lists(st.sampled_from(bp[:-1]), max_size=2, unique=True)):
            pv[t] = draw(small_q)
    return PeriodicBVFunction(bp, slopes, values, pv)


def random_bv_function(rng, max_pieces=5, denominator=24):
    """Same family as bv_functions, from a random.Random (for fixed-count loops)."""
    k = rng.randint(0, max_pieces - 1)
    inner = sorted({Fraction(rng.randint(1, denominator - 1), denominator) for _ in range(k)})
    bp = (Fraction(0), *inner, Fraction(1))
    m = len(bp) - 1
    q = lambda: Fraction(rng.randint(-36, 36), 12)
    pv = {}
    if rng.random() < 0.5:
        pv[rng.choice(bp[:-1])] = q()
    return PeriodicBVFunction(bp, tuple(q() for _ in range(m)), tuple(q() for _ in range(m)), pv)
