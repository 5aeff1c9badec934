"""Discrepancies of finite point sets, Weyl sums and the Erdos-Turan / Koksma bounds."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .analysis import PeriodicBVFunction, evaluate
from .sequences import PointSet, as_real, frac_of_multiple

__all__ = [
    "DiscrepancyResult",
    "WeylSum",
    "counting_function",
    "star_discrepancy",
    "extreme_discrepancy",
    "discrepancies",
    "weyl_sum",
    "weyl_sum_closed_form",
    "erdos_turan_bound",
    "koksma_bound",
    "schmidt_reference",
]


@dataclass(frozen=True)
class DiscrepancyResult:
    star: float
    extreme: float
    N: int

    def to_dict(self) -> dict:
        return {"N": self.N, "star": float(self.star), "extreme": float(self.extreme)}


@dataclass(frozen=True)
class WeylSum:
    h: int
    N: int
    value: complex

    def __abs__(self) -> float:
        return abs(self.value)


def _values(P) -> np.ndarray:
    if isinstance(P, PointSet):
        return P.values
    v = np.asarray(P, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("need a non-empty one-dimensional point set")
    return v


def _exact_values(P) -> list[Fraction]:
    if isinstance(P, PointSet):
        if P.exact is None:
            raise ValueError("point set carries no exact values")
        return list(P.exact)
    return [Fraction(x) for x in P]


def counting_function(P, a, b) -> int:
    """Number of points in the half-open interval [a, b)."""
    if not 0 <= a < b <= 1:
        raise ValueError("need 0 <= a < b <= 1")
    v = _values(P)
    return int(np.count_nonzero((v >= a) & (v < b)))


def _one_sided(P, exact: bool):
    """max_i (i/N - x_(i)) and max_i (x_(i) - (i-1)/N) over the sorted points."""
    if exact:
        xs = sorted(_exact_values(P))
        N = len(xs)
        up = max(Fraction(i, N) - x for i, x in enumerate(xs, 1))
        down = max(x - Fraction(i - 1, N) for i, x in enumerate(xs, 1))
        return up, down, N
    xs = np.sort(_values(P), kind="stable")
    N = xs.size
    i = np.arange(1, N + 1)
    return float(np.max(i / N - xs)), float(np.max(xs - (i - 1) / N)), N


def star_discrepancy(P, exact: bool = False):
    """sup_{0<=a<=1} |#{x_k < a}/N - a|, attained as a one-sided limit at a point."""
    up, down, _ = _one_sided(P, exact)
    return max(up, down)


def extreme_discrepancy(P, exact: bool = False):
    """sup over [a,b) of |#{x_k in [a,b)}/N - (b-a)|."""
    up, down, _ = _one_sided(P, exact)
    return up + down


def discrepancies(P, exact: bool = False) -> DiscrepancyResult:
    up, down, N = _one_sided(P, exact)
    return DiscrepancyResult(max(up, down), up + down, N)


def weyl_sum(P, h: int) -> WeylSum:
    """sum_k exp(2 pi i h x_k) by direct summation."""
    if h == 0:
        raise ValueError("h must be nonzero")
    v = _values(P)
    phase = 2 * np.pi * np.mod(h * v, 1.0)
    return WeylSum(h, int(v.size), complex(np.sum(np.cos(phase)), np.sum(np.sin(phase))))


def _centered(t: Fraction) -> Fraction:
    return t - 1 if t > Fraction(1, 2) else t


def weyl_sum_closed_form(x, h: int, N: int) -> complex:
    """Geometric-series value of sum_{k=1}^N exp(2 pi i h k x).

    (e(N t) - 1) e(t) / (e(t) - 1) with t = <h x>; both differences are
    formed as 2i sin(pi s) e(s/2) after reducing s to (-1/2, 1/2] exactly.
    When h x is an integer the series degenerates and N is returned.
    """
    if h == 0:
        raise ValueError("h must be nonzero")
    x = as_real(x)
    t = _centered(frac_of_multiple(abs(h), x))
    if t == 0:
        return complex(N)
    tN = _centered(frac_of_multiple(abs(h) * N, x))
    ft, fN = float(t), float(tN)
    num = math.sin(math.pi * fN) * cmath.exp(1j * math.pi * fN)
    den = math.sin(math.pi * ft) * cmath.exp(1j * math.pi * ft)
    value = num * cmath.exp(2j * math.pi * ft) / den
    # the sum for -h is the complex conjugate of the sum for h
    return value.conjugate() if h < 0 else value


def erdos_turan_bound(P, H: int) -> float:
    """3/H + (3/N) sum_{h<=H} |S_h| / h, an upper bound for the star discrepancy."""
    if H < 1:
        raise ValueError("H must be a positive integer")
    v = _values(P)
    N = v.size
    h = np.arange(1, H + 1)
    phase = 2 * np.pi * np.mod(np.outer(h, v), 1.0)
    mags = np.hypot(np.cos(phase).sum(axis=1), np.sin(phase).sum(axis=1))
    return 3.0 / H + 3.0 / N * float(np.sum(mags / h))


def koksma_bound(f: PeriodicBVFunction, P, exact: bool = False):
    """(|mean f(x_k) - int f|, Var(f) * D*_N); the first never exceeds the second."""
    if exact:
        xs = _exact_values(P)
        avg = sum((evaluate(f, x) for x in xs), Fraction(0)) / len(xs)
        lhs = abs(avg - f.mean())
        return lhs, f.variation() * star_discrepancy(P, exact=True)
    xs = _values(P)
    avg = math.fsum(float(evaluate(f, float(x))) for x in xs) / xs.size
    lhs = abs(avg - float(f.mean()))
    return lhs, float(f.variation()) * star_discrepancy(P)


def schmidt_reference(N: float) -> float:
    """(log N) / N, the shape of the unavoidable discrepancy of infinite sequences."""
    if N < 2:
        raise ValueError("N must be at least 2")
    return math.log(N) / N
