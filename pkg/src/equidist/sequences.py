"""Point sets and digit streams: <kx>, <n_k x>, <theta^k x>, <x^k>, base-b digits.

All fractional parts are reduced on exact integers (rationals or scaled
fixed-point mantissas); conversion to float64 happens only when a PointSet
is built.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from collections.abc import Sequence
from typing import Iterable, Union

import numpy as np

__all__ = [
    "FixedPoint",
    "HighPrecisionReal",
    "PrecisionExhausted",
    "PointSet",
    "DilationSequence",
    "GeometricTerms",
    "DigitStream",
    "as_real",
    "parse_real",
    "frac_of_multiple",
    "kronecker_sequence",
    "dilated_sequence",
    "dilated_points",
    "geometric_dilation",
    "power_sequence",
    "hadamard_ratio",
    "digits_of",
    "champernowne",
    "copeland_erdos",
    "block_frequency",
    "DEFAULT_BIT_BUDGET",
    "ERROR_BITS",
]

DEFAULT_BIT_BUDGET = 1 << 20
# fixed-point inputs must keep the accumulated error below 2**-ERROR_BITS
ERROR_BITS = 40

_BELOW_ONE = math.nextafter(1.0, 0.0)


class PrecisionExhausted(ValueError):
    """Raised when a computation would exceed the declared precision budget."""


@dataclass(frozen=True)
class FixedPoint:
    """The real number ``mantissa / 2**bits``, a truncation of some irrational."""

    mantissa: int
    bits: int

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("fixed-point precision must be at least 64 bits")

    @classmethod
    def sqrt(cls, n: int, bits: int = 128) -> "FixedPoint":
        return cls(math.isqrt(n << (2 * bits)), bits)

    @classmethod
    def from_fraction(cls, x: Fraction, bits: int = 128) -> "FixedPoint":
        return cls(math.floor(x * (1 << bits)), bits)

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 1 << self.bits)

    def __float__(self) -> float:
        return self.mantissa / (1 << self.bits)

    def __str__(self) -> str:
        return f"fixed({float(self)!r}@{self.bits})"


HighPrecisionReal = Union[int, Fraction, FixedPoint]


def as_real(x) -> HighPrecisionReal:
    """Coerce ints, floats, strings, Fractions and digit streams to an exact real."""
    if isinstance(x, (FixedPoint, Fraction)):
        return x
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not reals")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"non-finite real {x!r}")
        return Fraction(float(x))
    if isinstance(x, str):
        return parse_real(x)
    if isinstance(x, DigitStream):
        return x.to_fraction()
    raise TypeError(f"cannot interpret {type(x).__name__} as a real")


def parse_real(text: str) -> HighPrecisionReal:
    """Parse ``"3/7"``, ``"0.125"`` or ``"sqrt(2)@128"`` (fixed-point square root)."""
    s = text.strip()
    if s.startswith("sqrt(") and ")" in s:
        inner, _, rest = s[5:].partition(")")
        bits = int(rest[1:]) if rest.startswith("@") else 128
        return FixedPoint.sqrt(int(inner), bits)
    return Fraction(s)


def _num_den(x: HighPrecisionReal) -> tuple[int, int]:
    if isinstance(x, FixedPoint):
        return x.mantissa, 1 << x.bits
    x = Fraction(x)
    return x.numerator, x.denominator


def frac_of_multiple(n: int, x: HighPrecisionReal) -> Fraction:
    """Exact fractional part of ``n * x``.

    For fixed-point ``x`` the truncation error is multiplied by ``n``; a
    PrecisionExhausted is raised once it could exceed ``2**-ERROR_BITS``.
    """
    if isinstance(x, FixedPoint):
        if n.bit_length() - x.bits > -ERROR_BITS:
            raise PrecisionExhausted(
                f"multiplier with {n.bit_length()} bits needs more than "
                f"{x.bits} bits of precision in x"
            )
    p, q = _num_den(x)
    return Fraction((n * p) % q, q)


def _to_unit_float(num: int, den: int) -> float:
    # int / int is correctly rounded for arbitrarily large operands
    v = num / den
    return _BELOW_ONE if v >= 1.0 else v


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PointSet:
    """Ordered points in [0,1); ``exact`` holds the rationals they came from, if any."""

    values: np.ndarray
    exact: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("a point set needs at least one point")
        if np.any(v < 0.0) or np.any(v >= 1.0):
            raise ValueError("points must lie in [0,1)")
        object.__setattr__(self, "values", _frozen(v.copy()))
        if self.exact is not None and len(self.exact) != v.size:
            raise ValueError("exact values do not match float values")

    @classmethod
    def from_fractions(cls, xs: Iterable[Fraction]) -> "PointSet":
        xs = tuple(Fraction(x) for x in xs)
        vals = np.array([_to_unit_float(x.numerator, x.denominator) for x in xs])
        return cls(vals, xs)

    def __len__(self) -> int:
        return int(self.values.size)

    def __iter__(self):
        return iter(self.values.tolist())

    def __getitem__(self, i):
        return self.values[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def sorted(self) -> "PointSet":
        order = np.argsort(self.values, kind="stable")
        exact = None if self.exact is None else tuple(self.exact[i] for i in order)
        return PointSet(self.values[order], exact)

    def to_csv(self) -> str:
        return "".join(f"{v!r}\n" for v in self.values.tolist())

    @classmethod
    def from_csv(cls, text: str) -> "PointSet":
        rows = [r.strip() for r in text.splitlines() if r.strip()]
        if all("/" in r for r in rows):
            return cls.from_fractions(Fraction(r) for r in rows)
        return cls(np.array([float(r) for r in rows]))

    def to_json(self) -> str:
        return json.dumps(
            {"kind": "pointset", "base": None, "values": self.values.tolist()}
        )

    @classmethod
    def from_json(cls, text: str) -> "PointSet":
        obj = json.loads(text)
        if obj.get("kind") != "pointset":
            raise ValueError(f"expected a pointset, got kind={obj.get('kind')!r}")
        return cls(np.array(obj["values"], dtype=np.float64))


class GeometricTerms(Sequence):
    """theta, theta^2, ..., theta^K computed on access (never materialised)."""

    def __init__(self, theta: int, K: int):
        self.theta, self.K = int(theta), int(K)

    def __len__(self) -> int:
        return self.K

    def __getitem__(self, i):
        if isinstance(i, slice):
            return tuple(self.theta ** (k + 1) for k in range(*i.indices(self.K)))
        if i < 0:
            i += self.K
        if not 0 <= i < self.K:
            raise IndexError(i)
        return self.theta ** (i + 1)

    def __eq__(self, other) -> bool:
        if isinstance(other, GeometricTerms):
            return (self.theta, self.K) == (other.theta, other.K)
        if isinstance(other, (tuple, list)):
            return len(other) == self.K and tuple(self) == tuple(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.theta, self.K))

    def __repr__(self) -> str:
        return f"GeometricTerms(theta={self.theta}, K={self.K})"


@dataclass(frozen=True)
class DilationSequence:
    """Strictly increasing positive integers n_1 < n_2 < ...

    ``ratio`` is set for geometric sequences ``theta**k`` and unlocks the
    digit-window fast path in :func:`dilated_points`.
    """

    terms: Sequence[int]
    ratio: int | None = None

    def __post_init__(self):
        if isinstance(self.terms, GeometricTerms):
            if self.terms.theta < 2 or self.terms.K < 1:
                raise ValueError("need theta >= 2 and K >= 1")
            object.__setattr__(self, "ratio", self.terms.theta)
            return
        terms = tuple(int(t) for t in self.terms)
        if not terms:
            raise ValueError("empty dilation sequence")
        if terms[0] < 1:
            raise ValueError("dilation terms must be positive")
        if any(b <= a for a, b in zip(terms, terms[1:])):
            raise ValueError("dilation terms must be strictly increasing")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def initial_segment(cls, N: int) -> "DilationSequence":
        return cls(tuple(range(1, N + 1)))

    def head(self, N: int) -> "DilationSequence":
        if isinstance(self.terms, GeometricTerms):
            return DilationSequence(GeometricTerms(self.terms.theta, min(N, len(self))))
        return DilationSequence(self.terms[:N], self.ratio)

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def __iter__(self):
        return iter(self.terms)


def geometric_dilation(theta: int, K: int) -> DilationSequence:
    """theta, theta^2, ..., theta^K as exact integers (computed on access)."""
    if theta < 2 or K < 1:
        raise ValueError("need theta >= 2 and K >= 1")
    return DilationSequence(GeometricTerms(theta, K))


def hadamard_ratio(D: DilationSequence) -> Fraction:
    """min_k n_{k+1}/n_k as an exact rational (lacunary iff > 1)."""
    t = D.terms
    if len(t) < 2:
        raise ValueError("hadamard_ratio needs at least two terms")
    if isinstance(t, GeometricTerms):
        return Fraction(t.theta)
    return min(Fraction(b, a) for a, b in zip(t, t[1:]))


@dataclass(frozen=True, eq=False)
class DigitStream:
    """Digits r_1, r_2, ... of a base-b expansion, or of a concatenation construction."""

    base: int
    digits: np.ndarray
    origin: str = "explicit"

    ORIGINS = ("expansion-of-rational", "champernowne", "copeland-erdos", "explicit")

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be at least 2")
        d = np.asarray(self.digits, dtype=np.int64)
        if d.ndim != 1 or d.size == 0:
            raise ValueError("digit stream must be non-empty")
        if np.any(d < 0) or np.any(d >= self.base):
            raise ValueError(f"digits must lie in 0..{self.base - 1}")
        if self.origin not in self.ORIGINS:
            raise ValueError(f"unknown origin {self.origin!r}")
        object.__setattr__(self, "digits", _frozen(d.copy()))

    def __len__(self) -> int:
        return int(self.digits.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DigitStream):
            return NotImplemented
        return self.base == other.base and np.array_equal(self.digits, other.digits)

    def tolist(self) -> list[int]:
        return self.digits.tolist()

    def to_fraction(self) -> Fraction:
        """The terminating real 0.r_1 r_2 ... r_N in base b."""
        num = 0
        for d in self.digits.tolist():
            num = num * self.base + d
        return Fraction(num, self.base ** len(self))

    def to_csv(self) -> str:
        return "".join(f"{d}\n" for d in self.digits.tolist())

    def to_json(self) -> str:
        return json.dumps(
            {"kind": "digits", "base": self.base, "values": self.digits.tolist(),
             "origin": self.origin}
        )

    @classmethod
    def from_json(cls, text: str) -> "DigitStream":
        obj = json.loads(text)
        if obj.get("kind") != "digits":
            raise ValueError(f"expected digits, got kind={obj.get('kind')!r}")
        return cls(obj["base"], np.array(obj["values"]), obj.get("origin", "explicit"))


def kronecker_sequence(x, N: int) -> PointSet:
    """Points <k x>, k = 1..N."""
    if N < 1:
        raise ValueError("N must be positive")
    x = as_real(x)
    p, q = _num_den(x)
    if isinstance(x, FixedPoint):
        frac_of_multiple(N, x)  # precision check for the largest multiplier
        return PointSet(np.array([_to_unit_float((k * p) % q, q) for k in range(1, N + 1)]))
    return PointSet.from_fractions(Fraction((k * p) % q, q) for k in range(1, N + 1))


def _window_values(digits: np.ndarray, base: int, N: int) -> np.ndarray:
    """<b^k x> for k = 1..N when x = 0.d_1 d_2 ... in base b, from a digit window."""
    L = max(1, math.ceil(64 / math.log2(base)))
    if digits.size < N + L:
        raise PrecisionExhausted(
            f"need {N + L} digits of x for {N} dilations, have {digits.size}"
        )
    d = digits.astype(np.float64)
    vals = np.zeros(N)
    inv = 1.0 / base
    for i in range(L, 0, -1):
        vals = (vals + d[i : i + N]) * inv
    return np.minimum(vals, _BELOW_ONE)


def dilated_points(D: DilationSequence, x, N: int) -> np.ndarray:
    """Float array of <n_k x>, k = 1..N; see :func:`dilated_sequence`."""
    if N < 1:
        raise ValueError("N must be positive")
    if N > len(D):
        raise ValueError(f"N={N} exceeds the {len(D)} available dilation terms")
    if isinstance(x, DigitStream) and D.ratio == x.base and D.terms[0] == x.base:
        return _window_values(x.digits, x.base, N)
    x = as_real(x)
    if isinstance(x, FixedPoint) and D.ratio is not None and D.terms[0] == D.ratio:
        s = D.ratio.bit_length() - 1
        if D.ratio == 1 << s:
            # binary digits of the mantissa give <2^(s k) x> directly
            need = s * N + ERROR_BITS
            if need > x.bits:
                raise PrecisionExhausted(f"need {need} bits of x, have {x.bits}")
            bits = _mantissa_bits(x)
            stream = bits if s == 1 else _regroup(bits, s)
            usable = stream[: (x.bits // s)]
            return _window_values(usable, D.ratio, N)
    p, q = _num_den(x)
    if isinstance(x, FixedPoint):
        frac_of_multiple(D.terms[N - 1], x)
    return np.array([_to_unit_float((n * p) % q, q) for n in D.terms[:N]])


def _mantissa_bits(x: FixedPoint) -> np.ndarray:
    nbytes = (x.bits + 7) // 8
    raw = np.frombuffer((x.mantissa % (1 << x.bits) << (8 * nbytes - x.bits))
                        .to_bytes(nbytes, "big"), dtype=np.uint8)
    return np.unpackbits(raw)[: x.bits].astype(np.int64)


def _regroup(bits: np.ndarray, s: int) -> np.ndarray:
    n = bits.size // s
    w = 1 << np.arange(s - 1, -1, -1)
    return bits[: n * s].reshape(n, s) @ w


def dilated_sequence(D: DilationSequence, x, N: int | None = None) -> PointSet:
    """Points <n_k x>, k = 1..N, reduced on exact integers before rounding."""
    N = len(D) if N is None else N
    if N > len(D):
        raise ValueError(f"N={N} exceeds the {len(D)} available dilation terms")
    if not isinstance(x, (FixedPoint, DigitStream)):
        x = as_real(x)
        p, q = _num_den(x)
        return PointSet.from_fractions(Fraction((n * p) % q, q) for n in D.terms[:N])
    return PointSet(dilated_points(D, x, N))


def power_sequence(x, N: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> PointSet:
    """Points <x^k>, k = 1..N, for x > 1.

    Rational x = p/q is exact while q**N fits in ``bit_budget`` bits. A
    fixed-point x is accepted while the propagated truncation error
    k * x**(k-1) * 2**-bits stays below 2**-40.
    """
    x = as_real(x)
    if N < 1:
        raise ValueError("N must be positive")
    p, q = _num_den(x)
    if p <= q:
        raise ValueError("power_sequence needs x > 1")
    if isinstance(x, FixedPoint):
        lx = math.log2(p) - x.bits
        worst = math.log2(N) + (N - 1) * lx - x.bits
        if worst > -ERROR_BITS or N * x.bits > bit_budget:
            raise PrecisionExhausted(
                f"{x.bits}-bit x cannot resolve <x^{N}> to 2^-{ERROR_BITS}"
            )
    elif N * (q.bit_length()) > bit_budget:
        raise PrecisionExhausted(f"q^{N} exceeds the {bit_budget}-bit budget")
    out = []
    pk, qk = 1, 1
    for _ in range(N):
        pk *= p
        qk *= q
        out.append(Fraction(pk % qk, qk))
    if isinstance(x, FixedPoint):
        return PointSet(np.array([_to_unit_float(f.numerator, f.denominator) for f in out]))
    return PointSet.from_fractions(out)


def digits_of(x, base: int, N: int) -> DigitStream:
    """First N base-b digits of x in [0,1); terminating expansions end in zeros."""
    if base < 2:
        raise ValueError("base must be at least 2")
    x = as_real(x)
    p, q = _num_den(x)
    if not 0 <= p < q:
        raise ValueError("digits_of needs x in [0,1)")
    if isinstance(x, FixedPoint) and N * math.log2(base) > x.bits:
        raise PrecisionExhausted(f"{x.bits}-bit x has fewer than {N} reliable base-{base} digits")
    out = np.empty(N, dtype=np.int64)
    r = p
    for i in range(N):
        r *= base
        out[i], r = divmod(r, q)
    origin = "explicit" if isinstance(x, FixedPoint) else "expansion-of-rational"
    return DigitStream(base, out, origin)


def _int_digits(n: int, base: int) -> list[int]:
    out = []
    while n:
        n, r = divmod(n, base)
        out.append(r)
    return out[::-1]


def _concatenate(numbers: Iterable[int], base: int, N: int) -> np.ndarray:
    out: list[int] = []
    for n in numbers:
        out.extend(_int_digits(n, base))
        if len(out) >= N:
            break
    return np.array(out[:N], dtype=np.int64)


def champernowne(base: int, N: int) -> DigitStream:
    """First N digits of 0.1 2 3 ... 10 11 ... in base b."""
    if base < 2 or N < 1:
        raise ValueError("need base >= 2 and N >= 1")
    import itertools

    return DigitStream(base, _concatenate(itertools.count(1), base, N), "champernowne")


def _primes():
    from .gcdsums import primes_up_to

    lo, hi = 0, 1024
    while True:
        for p in primes_up_to(hi):
            if p > lo:
                yield p
        lo, hi = hi, hi * 2


def copeland_erdos(base: int, N: int) -> DigitStream:
    """First N digits of 0.2 3 5 7 11 13 ... in base b."""
    if base < 2 or N < 1:
        raise ValueError("need base >= 2 and N >= 1")
    return DigitStream(base, _concatenate(_primes(), base, N), "copeland-erdos")


def block_frequency(s: DigitStream, block: Sequence[int]) -> float:
    """Share of overlapping windows s[i:i+d] equal to ``block``."""
    d = len(block)
    if d < 1 or d > len(s):
        raise ValueError("block length must be between 1 and the stream length")
    if any(not 0 <= b < s.base for b in block):
        raise ValueError(f"block digit out of range for base {s.base}")
    windows = np.lib.stride_tricks.sliding_window_view(s.digits, d)
    hits = int(np.count_nonzero(np.all(windows == np.asarray(block), axis=1)))
    return hits / (len(s) - d + 1)
