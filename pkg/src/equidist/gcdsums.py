"""GCD sums, the Franel-Landau identity, published envelopes and an extremal-set search."""

from __future__ import annotations

import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .analysis import PeriodicBVFunction, fourier_coefficients, product_integral

__all__ = [
    "IntegerSet",
    "GcdSumValue",
    "SearchConfig",
    "SearchState",
    "SearchResult",
    "gcd",
    "totient",
    "totient_table",
    "primes_up_to",
    "gal_sum",
    "gcd_sum_alpha",
    "franel_landau",
    "sawtooth_sum_l2",
    "pair_correlation",
    "pair_correlation_constant",
    "gal_envelope",
    "g_alpha",
    "abs_bound",
    "log_abs_bound",
    "dyer_harman_bound",
    "extremal_search",
    "duffin_schaeffer_partial",
    "EXACT_LIMIT",
]

# alpha = 1 sums are kept as exact rationals up to this many elements
EXACT_LIMIT = 512


def gcd(m: int, n: int) -> int:
    if m < 1 or n < 1:
        raise ValueError("gcd is defined here for positive integers only")
    return math.gcd(m, n)


def primes_up_to(n: int) -> list[int]:
    """Sieve of Eratosthenes."""
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).tolist()


def totient_table(n: int) -> list[int]:
    """phi(0..n) by the multiplicative sieve; entry 0 is unused."""
    phi = list(range(n + 1))
    for p in range(2, n + 1):
        if phi[p] == p:
            for k in range(p, n + 1, p):
                phi[k] -= phi[k] // p
    return phi


def totient(n: int) -> int:
    if n < 1:
        raise ValueError("totient needs n >= 1")
    result, m = n, n
    for p in primes_up_to(math.isqrt(n)):
        if p * p > m:
            break
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
    if m > 1:
        result -= result // m
    return result


@dataclass(frozen=True)
class IntegerSet:
    elements: tuple[int, ...]

    def __post_init__(self):
        el = tuple(int(e) for e in self.elements)
        if not el:
            raise ValueError("empty integer set")
        if el[0] < 1 or any(b <= a for a, b in zip(el, el[1:])):
            raise ValueError("elements must be distinct positive integers in increasing order")
        object.__setattr__(self, "elements", el)

    @classmethod
    def of(cls, xs: Iterable[int]) -> "IntegerSet":
        xs = [int(x) for x in xs]
        if len(set(xs)) != len(xs):
            raise ValueError("elements must be distinct")
        return cls(tuple(sorted(xs)))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class GcdSumValue:
    value: float
    alpha: float
    exact: Fraction | None = None

    def __float__(self) -> float:
        return self.value


def _reduced_denominators(elements: Sequence[int]) -> Counter:
    # gcd(m,n)^2 / (m n) = 1 / ((m/g)(n/g))
    counts: Counter = Counter()
    for i, m in enumerate(elements):
        counts[1] += 1
        for n in elements[i + 1 :]:
            g = math.gcd(m, n)
            counts[(m // g) * (n // g)] += 2
    return counts


def _as_elements(S) -> tuple[int, ...]:
    return S.elements if isinstance(S, IntegerSet) else IntegerSet.of(S).elements


def gal_sum(S) -> GcdSumValue:
    """sum_{k,l} gcd(n_k,n_l)^2/(n_k n_l), diagonal included; exact up to EXACT_LIMIT."""
    return gcd_sum_alpha(S, 1)


def gcd_sum_alpha(S, alpha) -> GcdSumValue:
    """sum_{k,l} gcd(n_k,n_l)^(2 alpha) / (n_k n_l)^alpha for alpha in [1/2, 1]."""
    if not 0.5 <= alpha <= 1:
        raise ValueError("alpha must lie in [1/2,1]")
    el = _as_elements(S)
    counts = _reduced_denominators(el)
    if alpha == 1:
        if len(el) <= EXACT_LIMIT:
            exact = sum((Fraction(c, d) for d, c in counts.items()), Fraction(0))
            return GcdSumValue(float(exact), 1.0, exact)
        return GcdSumValue(math.fsum(c / d for d, c in counts.items()), 1.0)
    a = float(alpha)
    value = math.fsum(c * math.exp(-a * math.log(d)) for d, c in counts.items())
    return GcdSumValue(value, a)


def franel_landau(m: int, n: int) -> Fraction:
    """Closed form of int_0^1 ({mx}-1/2)({nx}-1/2) dx."""
    g = gcd(m, n)
    return Fraction(g * g, 12 * m * n)


def sawtooth_sum_l2(D, N: int | None = None) -> Fraction:
    """int_0^1 (sum_{k<=N} ({n_k x} - 1/2))^2 dx via the GCD-sum identity."""
    terms = tuple(D)
    N = len(terms) if N is None else N
    if N > len(terms):
        raise ValueError("N exceeds the number of dilation terms")
    value = gal_sum(IntegerSet.of(terms[:N])).exact
    if value is None:
        raise ValueError(f"exact sums are limited to {EXACT_LIMIT} terms")
    return value / 12


def pair_correlation(f: PeriodicBVFunction, m: int, n: int):
    """Exact int_0^1 f(mx) f(nx) dx over the common breakpoint refinement."""
    if m < 1 or n < 1:
        raise ValueError("dilations must be positive")
    return product_integral(f, m, f, n)


def pair_correlation_constant(f: PeriodicBVFunction, J: int = 4096) -> float:
    """Heuristic C_f with |int f(mx)f(nx)| <= C_f gcd^2/(mn).

    With K = max_j j*max(|a_j|,|b_j|) over j <= J, the coefficient bound
    K/j gives C_f = K^2 * zeta(2) / 2; padded by a factor 2.
    """
    a, b = fourier_coefficients(f, J)
    j = np.arange(1, J + 1)
    K = float(np.max(j * np.maximum(np.abs(a), np.abs(b))))
    return 2.0 * K * K * math.pi ** 2 / 12


def _loglog(N: float, floor: float) -> tuple[float, float]:
    if N < floor:
        raise ValueError(f"N must be at least {floor:g}")
    L = math.log(N)
    return L, math.log(L)


def gal_envelope(N: float) -> float:
    """N (log log N)^2, shape of the extremal order (constant unknown)."""
    _, LL = _loglog(N, 16)
    return N * LL * LL


def g_alpha(alpha: float, N: float) -> float:
    """Exponent function of the Aistleitner-Berkes-Seip bound.

    Defined for alpha in [1/2, 1) and N > e (so that log log N > 0).
    """
    if not 0.5 <= alpha < 1:
        raise ValueError("alpha must lie in [1/2,1); use gal_envelope for alpha = 1")
    if N <= math.e:
        raise ValueError("g_alpha needs log log N > 0, i.e. N > e")
    L = math.log(N)
    LL = math.log(L)
    if alpha == 0.5:
        return 25.0 * math.sqrt(L) * math.sqrt(LL)
    lead = 8.0 / (1 - alpha) + 16.0 * 2.0 ** (-alpha) / math.sqrt(2 * alpha - 1)
    return lead * L ** (1 - alpha) / LL ** alpha + L ** ((1 - alpha) / 2) / (1 - alpha)


def log_abs_bound(alpha: float, N: float, eps: float, C_eps: float) -> float:
    if eps <= 0 or C_eps <= 0:
        raise ValueError("eps and C_eps must be positive")
    return math.log(C_eps) + math.log(N) + (1 + eps) * g_alpha(alpha, N)


def abs_bound(alpha: float, N: float, eps: float, C_eps: float) -> float:
    """C_eps N exp((1+eps) g(alpha, N)); overflows to inf."""
    try:
        return math.exp(log_abs_bound(alpha, N, eps, C_eps))
    except OverflowError:
        return math.inf


def dyer_harman_bound(N: float) -> float:
    """N exp(5 log N / log log N)."""
    L, LL = _loglog(N, 16)
    try:
        return N * math.exp(5 * L / LL)
    except OverflowError:
        return math.inf


def duffin_schaeffer_partial(psi: Sequence, N: int | None = None):
    """sum_{n<=N} psi(n) phi(n) / n with psi tabulated as psi[0] = psi(1), ..."""
    N = len(psi) if N is None else N
    if N > len(psi):
        raise ValueError("psi table is shorter than N")
    values = list(psi[:N])
    if any(v < 0 for v in values):
        raise ValueError("psi must be non-negative")
    phi = totient_table(N)
    exact = all(isinstance(v, (int, Fraction)) for v in values)
    if exact:
        return sum((Fraction(v) * Fraction(phi[n], n) for n, v in enumerate(values, 1)), Fraction(0))
    return math.fsum(float(v) * phi[n] / n for n, v in enumerate(values, 1))


# --------------------------------------------------------------------------
# extremal search

SMOOTH_PRIMES = (2, 3, 5, 7)


@dataclass(frozen=True)
class SearchConfig:
    """Local-search settings; ``max_element`` defaults to 4 N^2."""

    seed: int = 0
    iterations: int = 200
    restarts: int = 4
    max_element: int | None = None
    primes: tuple[int, ...] = SMOOTH_PRIMES
    record_visited: bool = False
    workers: int = 1


@dataclass
class SearchState:
    current: IntegerSet
    best: IntegerSet
    best_value: float
    rng_seed: int
    iteration: int = 0


@dataclass
class SearchResult:
    best: IntegerSet
    value: GcdSumValue
    visited: list[IntegerSet] = field(default_factory=list)
    iterations: int = 0

    def __iter__(self):
        return iter((self.best, self.value))


class _Evaluator:
    """Row sums of the GCD matrix, for O(N) single-element replacement deltas."""

    def __init__(self, elements: list[int], alpha: float):
        self.alpha = alpha
        self.el = list(elements)
        self.rows = [self._row(e, self.el) for e in self.el]

    def term(self, m: int, n: int) -> float:
        g = math.gcd(m, n)
        d = (m // g) * (n // g)
        return 1.0 / d if self.alpha == 1 else d ** (-self.alpha)

    def _row(self, e: int, others: list[int]) -> float:
        return math.fsum(self.term(e, o) for o in others)

    @property
    def value(self) -> float:
        return math.fsum(self.rows)

    def delta(self, i: int, new: int) -> float:
        old = self.el[i]
        s = 0.0
        for j, o in enumerate(self.el):
            if j != i:
                s += self.term(new, o) - self.term(old, o)
        return 2.0 * s

    def replace(self, i: int, new: int) -> None:
        self.el[i] = new
        self.rows = [self._row(e, self.el) for e in self.el]


def _smooth_numbers(limit: int, primes: Sequence[int]) -> list[int]:
    out = {1}
    for p in primes:
        frontier = list(out)
        for v in frontier:
            v *= p
            while v <= limit:
                out.add(v)
                v *= p
    return sorted(out)


def _neighbours(el: list[int], i: int, cfg_primes, limit: int) -> list[int]:
    e = el[i]
    taken = set(el)
    cand = []
    for p in cfg_primes:
        for v in (e * p, e // p if e % p == 0 else 0):
            if 1 <= v <= limit and v not in taken:
                cand.append(v)
    return cand


def _normalise(el: list[int]) -> tuple[int, ...]:
    # the sum is invariant under scaling by a common factor
    g = 0
    for e in el:
        g = math.gcd(g, e)
    return tuple(sorted(e // g for e in el))


def _run_restart(N: int, alpha: float, cfg: SearchConfig, restart: int):
    limit = cfg.max_element if cfg.max_element is not None else 4 * N * N
    if limit < N:
        raise ValueError("max_element is smaller than N")
    seed = int(np.random.SeedSequence([cfg.seed, restart]).generate_state(1)[0])
    rng = random.Random(seed)
    smooth = _smooth_numbers(limit, cfg.primes)
    if restart == 0 or len(smooth) < N:
        start = list(range(1, N + 1))
    else:
        start = rng.sample(smooth, N)
    ev = _Evaluator(start, alpha)
    state = SearchState(IntegerSet.of(start), IntegerSet.of(start), ev.value, seed)
    visited = [tuple(sorted(start))] if cfg.record_visited else []
    current_value = ev.value
    for it in range(cfg.iterations):
        state.iteration = it + 1
        best_move, best_gain = None, 1e-12
        for i in range(N):
            for v in _neighbours(ev.el, i, cfg.primes, limit):
                gain = ev.delta(i, v)
                if gain > best_gain:
                    best_move, best_gain = (i, v), gain
        if best_move is None:
            # local optimum: inject a smooth number in place of a random element
            pool = [s for s in smooth if s not in set(ev.el)]
            if not pool:
                break
            best_move = (rng.randrange(N), rng.choice(pool))
        ev.replace(*best_move)
        current_value = ev.value
        if cfg.record_visited:
            visited.append(tuple(sorted(ev.el)))
        if current_value > state.best_value + 1e-12:
            state.best_value = current_value
            state.best = IntegerSet.of(ev.el)
        state.current = IntegerSet.of(ev.el)
    return state.best_value, _normalise(list(state.best.elements)), visited, state.iteration


def extremal_search(N: int, alpha: float, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Steepest-ascent search with restarts for sets maximising the GCD sum.

    Moves replace one element by e*p or e/p (p a small prime), bounded by
    ``max_element``; at a local optimum a random smooth number is swapped
    in. Restart 0 starts from {1..N}. The best set is divided by the gcd
    of its elements, which leaves the sum unchanged.
    """
    if N < 2:
        raise ValueError("extremal_search needs N >= 2")
    if cfg.iterations < 1 or cfg.restarts < 1:
        raise ValueError("iteration budget must be positive")
    if not 0.5 <= alpha <= 1:
        raise ValueError("alpha must lie in [1/2,1]")
    args = [(N, alpha, cfg, r) for r in range(cfg.restarts)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            runs = list(pool.map(_run_restart_star, args))
    else:
        runs = [_run_restart(*a) for a in args]
    # highest exact value first, then lexicographically smallest set
    scored = []
    for _, best, _, _ in runs:
        scored.append((gcd_sum_alpha(best, alpha), best))
    top = max(scored, key=lambda t: (_sort_key(t[0]), _neg_lex(t[1])))
    visited = [IntegerSet(v) for run in runs for v in run[2]]
    return SearchResult(IntegerSet(top[1]), top[0], visited, sum(r[3] for r in runs))


def _run_restart_star(a):
    return _run_restart(*a)


def _sort_key(v: GcdSumValue):
    return v.exact if v.exact is not None else v.value


def _neg_lex(t: tuple[int, ...]):
    return tuple(-e for e in t)
