"""Independent brute-force oracles shared by the tests."""

from fractions import Fraction


def _candidates(xs):
    return sorted({Fraction(0), Fraction(1), *map(Fraction, xs)})


def brute_star(xs):
    """sup_a |#{x < a}/N - a| over a in {0, x_i, 1}, using both one-sided limits."""
    xs = [Fraction(x) for x in xs]
    N = len(xs)
    best = Fraction(0)
    for a in _candidates(xs):
        below = sum(1 for x in xs if x < a)
        upto = sum(1 for x in xs if x <= a)
        best = max(best, abs(Fraction(below, N) - a), abs(Fraction(upto, N) - a) if a < 1 else 0)
    return best


def brute_extreme(xs):
    """sup over [a,b) of |#/N - (b-a)| with endpoints at candidates, one-sided limits included."""
    xs = [Fraction(x) for x in xs]
    N = len(xs)
    cands = _candidates(xs)
    best = Fraction(0)
    for i, a in enumerate(cands):
        for b in cands[i:]:
            # [a, b) ; (a, b) ; [a, b] ; (a, b]  realised as limits of half-open intervals
            for left_closed in (True, False):
                for right_closed in (False, True):
                    if right_closed and b == 1:
                        continue
                    if a == b and not (left_closed and right_closed):
                        continue
                    cnt = sum(
                        1 for x in xs
                        if (a <= x if left_closed else a < x) and (x <= b if right_closed else x < b)
                    )
                    best = max(best, abs(Fraction(cnt, N) - (b - a)))
    return best


def gal_sum_pairs(S):
    """sum_{k,l} gcd^2/(n_k n_l) by a plain double loop."""
    from math import gcd

    return sum(Fraction(gcd(m, n) ** 2, m * n) for m in S for n in S)


def piecewise_square_integral(terms):
    """int_0^1 (sum_k ({n_k x} - 1/2))^2 dx on the grid of all j/n_k, exact."""
    cuts = sorted({Fraction(j, n) for n in terms for j in range(n + 1)})
    total = Fraction(0)
    for u, w in zip(cuts, cuts[1:]):
        # on (u, w) every {n x} - 1/2 is affine: evaluate at interior-limit endpoints
        mid = (u + w) / 2
        def val(x):
            s = Fraction(0)
            for n in terms:
                j = (n * mid).__floor__()
                s += n * x - j - Fraction(1, 2)
            return s
        a, b = val(u), val(w)
        total += (w - u) * (a * a + a * b + b * b) / 3
    return total
