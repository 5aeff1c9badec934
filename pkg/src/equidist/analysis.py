"""Periodic piecewise-affine functions of bounded variation and sums of their dilates.

Functions are stored per piece: on [t_i, t_{i+1}) the value is
``values[i] + slopes[i] * (x - t_i)``. Breakpoints and coefficients may be
Fractions, in which case evaluation, means, variation and product integrals
are exact.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .sequences import DilationSequence, frac_of_multiple

__all__ = [
    "PeriodicBVFunction",
    "QuadratureSpec",
    "GridBudgetExceeded",
    "sawtooth",
    "centered_indicator",
    "zero_function",
    "evaluate",
    "evaluate_array",
    "fourier_coefficients",
    "fourier_partial_sum",
    "product_integral",
    "dilated_sum",
    "maximal_partial_sum",
    "dilated_sum_l2_exact",
    "l2_maximal_norm",
    "rm_bound",
    "rm_check",
    "MAX_GRID",
    "MAX_FOURIER_TERMS",
]

MAX_GRID = 1 << 22
MIN_GRID = 1 << 10
MAX_FOURIER_TERMS = 1 << 14
# cells * lines^2 allowed for exact envelope integration
EXACT_WORK_LIMIT = 4_000_000


class GridBudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class PeriodicBVFunction:
    breakpoints: tuple
    slopes: tuple
    values: tuple
    # values at breakpoints that differ from the right limit
    point_values: Mapping = field(default_factory=dict)

    def __post_init__(self):
        bp, sl, va = tuple(self.breakpoints), tuple(self.slopes), tuple(self.values)
        if len(bp) < 2 or bp[0] != 0 or bp[-1] != 1:
            raise ValueError("breakpoints must run from 0 to 1")
        if any(b <= a for a, b in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(sl) != len(bp) - 1 or len(va) != len(bp) - 1:
            raise ValueError("need one slope and one value per piece")
        for t in self.point_values:
            if t not in bp[:-1]:
                raise ValueError(f"point value at {t} is not a breakpoint in [0,1)")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "slopes", sl)
        object.__setattr__(self, "values", va)
        object.__setattr__(self, "point_values", dict(self.point_values))

    @property
    def pieces(self) -> int:
        return len(self.slopes)

    def _end_value(self, i: int):
        """Left limit at t_{i+1}."""
        return self.values[i] + self.slopes[i] * (self.breakpoints[i + 1] - self.breakpoints[i])

    def mean(self):
        total = 0
        for i in range(self.pieces):
            h = self.breakpoints[i + 1] - self.breakpoints[i]
            total += (self.values[i] + self._end_value(i)) * h / 2
        return total

    def variation(self):
        """Total variation on [0,1); the wrap-around jump at 1 is not counted."""
        total = 0
        for i in range(self.pieces):
            h = self.breakpoints[i + 1] - self.breakpoints[i]
            total += abs(self.slopes[i]) * h
        for i in range(1, self.pieces):
            total += abs(self.values[i] - self._end_value(i - 1))
        for t, pv in self.point_values.items():
            i = self.breakpoints.index(t)
            right = self.values[i]
            if i == 0:
                total += abs(right - pv)
            else:
                left = self._end_value(i - 1)
                total += abs(pv - left) + abs(right - pv) - abs(right - left)
        return total

    def second_moment(self):
        total = 0
        for i in range(self.pieces):
            h = self.breakpoints[i + 1] - self.breakpoints[i]
            a, b = self.values[i], self._end_value(i)
            total += h * (a * a + a * b + b * b) / 3
        return total

    def __call__(self, x):
        return evaluate(self, x)

    def to_json(self) -> str:
        def enc(v):
            return str(v) if isinstance(v, Fraction) else v

        obj = {
            "breakpoints": [enc(t) for t in self.breakpoints],
            "slopes": [enc(s) for s in self.slopes],
            "values": [enc(v) for v in self.values],
        }
        if self.point_values:
            obj["point_values"] = [[enc(t), enc(v)] for t, v in self.point_values.items()]
        return json.dumps(obj)

    @classmethod
    def from_json(cls, text: str) -> "PeriodicBVFunction":
        obj = json.loads(text)

        def dec(v):
            return Fraction(v) if isinstance(v, (str, int)) else v

        pv = {dec(t): dec(v) for t, v in obj.get("point_values", [])}
        return cls(
            tuple(dec(t) for t in obj["breakpoints"]),
            tuple(dec(s) for s in obj["slopes"]),
            tuple(dec(v) for v in obj["values"]),
            pv,
        )


def sawtooth() -> PeriodicBVFunction:
    """{x} - 1/2."""
    return PeriodicBVFunction((Fraction(0), Fraction(1)), (Fraction(1),), (Fraction(-1, 2),))


def zero_function() -> PeriodicBVFunction:
    return PeriodicBVFunction((Fraction(0), Fraction(1)), (Fraction(0),), (Fraction(0),))


def centered_indicator(a, b) -> PeriodicBVFunction:
    """1_{(a,b)}({x}) - (b - a); the open interval is kept via a point value at a."""
    a, b = Fraction(a), Fraction(b)
    if not 0 <= a < b <= 1:
        raise ValueError("need 0 <= a < b <= 1")
    L = b - a
    bp, vals = [Fraction(0)], []
    if a > 0:
        bp.append(a)
        vals.append(-L)
    vals.append(1 - L)
    if b < 1:
        bp.append(b)
        vals.append(-L)
    bp.append(Fraction(1))
    return PeriodicBVFunction(tuple(bp), (Fraction(0),) * len(vals), tuple(vals), {a: -L})


def _reduce(x):
    if isinstance(x, float):
        return x - math.floor(x)
    return x - math.floor(x)


def evaluate(f: PeriodicBVFunction, x):
    """Right-continuous evaluation of the 1-periodic extension."""
    u = _reduce(x)
    if u in f.point_values:
        return f.point_values[u]
    i = bisect.bisect_right(f.breakpoints, u) - 1
    return f.values[i] + f.slopes[i] * (u - f.breakpoints[i])


def _float_data(f: PeriodicBVFunction):
    return (
        np.array([float(t) for t in f.breakpoints]),
        np.array([float(s) for s in f.slopes]),
        np.array([float(v) for v in f.values]),
    )


def evaluate_array(f: PeriodicBVFunction, xs: np.ndarray) -> np.ndarray:
    bp, sl, va = _float_data(f)
    u = np.mod(np.asarray(xs, dtype=np.float64), 1.0)
    i = np.clip(np.searchsorted(bp, u, side="right") - 1, 0, f.pieces - 1)
    out = va[i] + sl[i] * (u - bp[i])
    for t, pv in f.point_values.items():
        out[u == float(t)] = float(pv)
    return out


def fourier_coefficients(f: PeriodicBVFunction, J: int) -> tuple[np.ndarray, np.ndarray]:
    """a_j = 2 int f cos(2 pi j x), b_j = 2 int f sin(2 pi j x), j = 1..J.

    Integrated in closed form piece by piece (integration by parts).
    """
    if J < 1:
        raise ValueError("J must be positive")
    if J > MAX_FOURIER_TERMS:
        raise ValueError(f"J is capped at {MAX_FOURIER_TERMS}")
    j = np.arange(1, J + 1, dtype=np.float64)
    omega = 2 * np.pi * j
    c = np.zeros(J, dtype=np.complex128)
    for i in range(f.pieces):
        u, w = float(f.breakpoints[i]), float(f.breakpoints[i + 1])
        A, B, s = float(f.values[i]), float(f._end_value(i)), float(f.slopes[i])
        eu = np.exp(2j * np.pi * np.mod(j * u, 1.0))
        ew = np.exp(2j * np.pi * np.mod(j * w, 1.0))
        c += (B * ew - A * eu) / (1j * omega) + s * (ew - eu) / omega ** 2
    return 2 * c.real, 2 * c.imag


def fourier_partial_sum(f: PeriodicBVFunction, J: int, x: float) -> float:
    a, b = fourier_coefficients(f, J)
    j = np.arange(1, J + 1)
    phase = 2 * np.pi * np.mod(j * float(x), 1.0)
    return float(np.sum(a * np.cos(phase) + b * np.sin(phase)))


# --------------------------------------------------------------------------
# exact integration over breakpoint refinements


def _dilated_breaks(f: PeriodicBVFunction, n: int) -> set:
    return {Fraction(j) / n + Fraction(t) / n for j in range(n) for t in f.breakpoints[:-1]}


def _refinement(fs_ns) -> list:
    cuts = {Fraction(1)}
    for f, n in fs_ns:
        cuts |= _dilated_breaks(f, n)
    return sorted(cuts)


def _cell_values(f: PeriodicBVFunction, n: int, u, w):
    """Values of x -> f(n x) at u (right limit) and w (left limit); affine on [u,w]."""
    mid = (u + w) / 2
    y = n * mid
    j = math.floor(y)
    i = bisect.bisect_right(f.breakpoints, y - j) - 1
    t, v, s = f.breakpoints[i], f.values[i], f.slopes[i]
    return v + s * (n * u - j - t), v + s * (n * w - j - t)


def product_integral(f: PeriodicBVFunction, m: int, g: PeriodicBVFunction, n: int):
    """Exact int_0^1 f(m x) g(n x) dx (exact when f, g carry Fractions)."""
    cuts = _refinement([(f, m), (g, n)])
    total = 0
    u = Fraction(0)
    for w in cuts:
        f0, f1 = _cell_values(f, m, u, w)
        g0, g1 = _cell_values(g, n, u, w)
        total += (w - u) * (2 * f0 * g0 + f0 * g1 + f1 * g0 + 2 * f1 * g1) / 6
        u = w
    return total


def _check_lengths(D, c, M):
    terms = tuple(D)
    c = tuple(c)
    if M < 1 or M > min(len(terms), len(c)):
        raise ValueError(
            f"M={M} exceeds the available terms ({len(terms)} dilations, {len(c)} coefficients)"
        )
    return terms[:M], c[:M]


def _partial_sums(f, D, c, x, M):
    terms, c = _check_lengths(D, c, M)
    xr = Fraction(x) if isinstance(x, (int, float)) else x
    exact = all(isinstance(v, (int, Fraction)) for v in c) and isinstance(xr, Fraction)
    acc = 0
    out = []
    for n, ck in zip(terms, c):
        u = frac_of_multiple(n, xr)
        fx = evaluate(f, u if exact else float(u))
        acc += ck * fx
        out.append(acc)
    return out


def dilated_sum(f: PeriodicBVFunction, D, c, x, M: int):
    """sum_{k<=M} c_k f(n_k x); n_k x is reduced exactly before evaluation."""
    return _partial_sums(f, D, c, x, M)[-1]


def maximal_partial_sum(f: PeriodicBVFunction, D, c, x, N: int):
    """max_{1<=M<=N} |sum_{k<=M} c_k f(n_k x)|."""
    return max(abs(s) for s in _partial_sums(f, D, c, x, N))


def dilated_sum_l2_exact(f: PeriodicBVFunction, D, c, N: int):
    """Exact int_0^1 (sum_{k<=N} c_k f(n_k x))^2 dx via breakpoint refinement."""
    terms, c = _check_lengths(D, c, N)
    cuts = _refinement([(f, n) for n in set(terms)])
    total = 0
    u = Fraction(0)
    for w in cuts:
        a = b = 0
        for n, ck in zip(terms, c):
            v0, v1 = _cell_values(f, n, u, w)
            a += ck * v0
            b += ck * v1
        total += (w - u) * (a * a + a * b + b * b) / 3
        u = w
    return total


@dataclass(frozen=True)
class QuadratureSpec:
    """``grid``: midpoint rule on G points (auto-sized when G is None). ``exact-piecewise``: exact."""

    mode: str = "grid"
    G: int | None = None

    def __post_init__(self):
        if self.mode not in ("grid", "exact-piecewise"):
            raise ValueError(f"unknown quadrature mode {self.mode!r}")
        if self.mode == "grid" and self.G is not None and not MIN_GRID <= self.G <= MAX_GRID:
            raise ValueError(f"grid size must lie in [{MIN_GRID}, {MAX_GRID}]")


def _grid_size(Q: QuadratureSpec, N: int, top: int) -> int:
    need = 4 * N * top
    if need > MAX_GRID:
        raise GridBudgetExceeded(f"grid of {need} points exceeds the cap {MAX_GRID}")
    if Q.G is not None:
        if Q.G < need:
            raise GridBudgetExceeded(f"grid size {Q.G} is below the required {need}")
        return Q.G
    return max(MIN_GRID, 1 << (need - 1).bit_length())


def _grid_phases(n: int, G: int) -> np.ndarray:
    # x_g = (2g+1)/(2G); <n x_g> reduced on integers
    odd = 2 * np.arange(G, dtype=np.int64) + 1
    return ((n % (2 * G)) * odd % (2 * G)) / (2.0 * G)


def l2_maximal_norm(f: PeriodicBVFunction, D, c, N: int, Q: QuadratureSpec = QuadratureSpec()) -> float:
    """(int_0^1 max_{M<=N} |sum_{k<=M} c_k f(n_k x)|^2 dx)^(1/2).

    Grid mode is a midpoint-rule estimate that only sees the maximum at grid
    points. Exact mode integrates the upper envelope of the partial sums on
    each refinement cell and is limited to small N * (number of breakpoints).
    """
    terms, c = _check_lengths(D, c, N)
    if Q.mode == "exact-piecewise":
        return math.sqrt(float(_l2_maximal_exact(f, terms, c)))
    G = _grid_size(Q, N, max(terms))
    running = np.zeros(G)
    best = np.zeros(G)
    for n, ck in zip(terms, c):
        running += float(ck) * evaluate_array(f, _grid_phases(n, G))
        np.maximum(best, np.abs(running), out=best)
    return math.sqrt(float(np.mean(best * best)))


def _l2_maximal_exact(f, terms, c):
    cuts = _refinement([(f, n) for n in set(terms)])
    lines = 2 * len(terms)
    if len(cuts) * lines * lines > EXACT_WORK_LIMIT:
        raise GridBudgetExceeded("exact maximal integration is too large; use grid mode")
    total = Fraction(0)
    u = Fraction(0)
    for w in cuts:
        ends = []
        a = b = 0
        for n, ck in zip(terms, c):
            v0, v1 = _cell_values(f, n, u, w)
            a += ck * v0
            b += ck * v1
            ends.append((a, b))
            ends.append((-a, -b))
        # split points where two lines cross inside the cell (as a fraction of the cell)
        taus = {Fraction(0), Fraction(1)}
        for i in range(len(ends)):
            for k in range(i + 1, len(ends)):
                d0 = ends[i][0] - ends[k][0]
                d1 = ends[i][1] - ends[k][1]
                if d0 != d1:
                    tau = Fraction(d0) / (d0 - d1)
                    if 0 < tau < 1:
                        taus.add(tau)
        taus = sorted(taus)
        for t0, t1 in zip(taus, taus[1:]):
            tm = (t0 + t1) / 2
            y0, y1 = max(ends, key=lambda e: e[0] + (e[1] - e[0]) * tm)
            p = y0 + (y1 - y0) * t0
            q = y0 + (y1 - y0) * t1
            total += (w - u) * (t1 - t0) * (p * p + p * q + q * q) / 3
        u = w
    return total


def rm_bound(N: int, c: Sequence) -> float:
    """(log2 N + 2)^2 sum c_k^2."""
    if len(c) != N:
        raise ValueError("need exactly N coefficients")
    return (math.log2(N) + 2) ** 2 * math.fsum(float(v) ** 2 for v in c)


def rm_check(frequencies, c: Sequence, Q: QuadratureSpec = QuadratureSpec()) -> tuple[float, float]:
    """Grid estimate of int max_M (sum_{k<=M} c_k sqrt2 cos 2 pi n_k x)^2 dx, and the bound.

    The sqrt 2 makes the cosines orthonormal.
    """
    n = tuple(frequencies)
    if len(set(n)) != len(n):
        raise ValueError("frequencies must be distinct")
    if len(c) != len(n):
        raise ValueError("need one coefficient per frequency")
    if Q.mode != "grid":
        raise ValueError("rm_check supports grid quadrature only")
    N = len(n)
    rhs = rm_bound(N, c)
    G = _grid_size(Q, N, max(n))
    # every phase is r/(2G) for an integer r, so one cosine table serves all n_k
    table = math.sqrt(2) * np.cos(np.pi * np.arange(2 * G) / G)
    odd = 2 * np.arange(G, dtype=np.int64) + 1
    running = np.zeros(G)
    best = np.zeros(G)
    for nk, ck in zip(n, c):
        running += float(ck) * table[(nk % (2 * G)) * odd % (2 * G)]
        np.maximum(best, running * running, out=best)
    return float(np.mean(best)), rhs
