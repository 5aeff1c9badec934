"""Monte-Carlo experiments for lacunary systems: CLT, LIL trajectories, Baker ratios.

Nothing here claims convergence. log log N stays below about 3 at any
feasible N, so the reports are trajectories and bands only.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .discrepancy import star_discrepancy
from .sequences import (
    DigitStream,
    DilationSequence,
    FixedPoint,
    as_real,
    dilated_points,
    geometric_dilation,
    hadamard_ratio,
)

__all__ = [
    "RngSpec",
    "EmpiricalCDF",
    "TrajectoryReport",
    "CLTResult",
    "normal_cdf",
    "normalizer",
    "sample_uniform",
    "sample_digits",
    "clt_experiment",
    "lil_sum_trajectory",
    "lil_discrepancy_trajectory",
    "fukuyama_constant",
    "fukuyama_band",
    "baker_ratio",
    "DEGENERATE_DENOMINATOR",
]

# exact rationals with denominator up to this are flagged as degenerate parameters
DEGENERATE_DENOMINATOR = 10**6


def normal_cdf(t: float) -> float:
    """Standard normal distribution function via erfc (about 1e-16 relative)."""
    return 0.5 * math.erfc(-t / math.sqrt(2.0))


@dataclass(frozen=True)
class RngSpec:
    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))


def sample_uniform(rng: RngSpec, M: int, bits: int = 64) -> list[FixedPoint]:
    """M reproducible uniform reals on [0,1) with ``bits`` fractional bits."""
    if M < 1:
        raise ValueError("M must be positive")
    if bits < 64:
        raise ValueError("at least 64 bits are drawn")
    g = rng.generator()
    words = (bits + 63) // 64
    raw = g.integers(0, 1 << 64, size=(M, words), dtype=np.uint64, endpoint=False)
    out = []
    for row in raw:
        m = 0
        for w in row.tolist():
            m = (m << 64) | w
        out.append(FixedPoint(m >> (64 * words - bits), bits))
    return out


def sample_digits(rng: RngSpec, base: int, n: int) -> DigitStream:
    """A uniform random real given by n i.i.d. base-b digits."""
    g = rng.generator()
    return DigitStream(base, g.integers(0, base, size=n), "explicit")


@dataclass(frozen=True, eq=False)
class EmpiricalCDF:
    values: np.ndarray

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=np.float64))
        if v.size < 1:
            raise ValueError("empty sample")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def M(self) -> int:
        return int(self.values.size)

    def __call__(self, t: float) -> float:
        return np.searchsorted(self.values, t, side="right") / self.M

    def ks_distance(self, cdf=normal_cdf) -> float:
        """sup_t |F_M(t) - cdf(t)|."""
        F = np.array([cdf(float(s)) for s in self.values])
        i = np.arange(1, self.M + 1)
        return float(max(np.max(i / self.M - F), np.max(F - (i - 1) / self.M)))


@dataclass
class CLTResult:
    cdf: EmpiricalCDF
    ks: float
    lacunary: bool
    # min n_{k+1}/n_k over the head; always > 1 for a finite increasing head,
    # so the ratio itself says more than the flag (1 + 1/(N-1) for D = (k))
    ratio: float = math.inf

    def __iter__(self):
        return iter((self.cdf, self.ks))


NORMALIZERS = ("lil", "baker", "optimal", "clt")


def normalizer(kind: str, N: int, eps: float = 0.0) -> float:
    """lil: sqrt(2N log log N); baker: sqrt(N)(log N)^(3/2+eps);
    optimal: sqrt(N)(log N)^(1/2+eps); clt: sqrt(N/2)."""
    if kind == "lil":
        if N < 16:
            raise ValueError("N >= 16 required for the lil normalizer")
        return math.sqrt(2 * N * math.log(math.log(N)))
    if kind == "baker":
        return math.sqrt(N) * math.log(N) ** (1.5 + eps)
    if kind == "optimal":
        return math.sqrt(N) * math.log(N) ** (0.5 + eps)
    if kind == "clt":
        return math.sqrt(N / 2)
    raise ValueError(f"unknown normalizer {kind!r}")


@dataclass
class TrajectoryReport:
    Ns: list[int]
    raw: list[float]
    normalized: list[float]
    normalizer: str
    seed: int | None = None
    degenerate: bool = False
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not len(self.Ns) == len(self.raw) == len(self.normalized):
            raise ValueError("report columns must have equal length")
        if any(b <= a for a, b in zip(self.Ns, self.Ns[1:])):
            raise ValueError("Ns must be strictly increasing")

    def running_max(self) -> list[float]:
        return np.maximum.accumulate(self.normalized).tolist()

    def to_dict(self) -> dict:
        return {
            "Ns": list(self.Ns),
            "raw": [float(v) for v in self.raw],
            "normalized": [float(v) for v in self.normalized],
            "normalizer": self.normalizer,
            "seed": self.seed,
            "degenerate": self.degenerate,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["Ns", "raw", "normalized"])
        for n, r, z in zip(self.Ns, self.raw, self.normalized):
            w.writerow([n, repr(float(r)), repr(float(z))])
        return buf.getvalue()


def _is_degenerate(x) -> bool:
    if isinstance(x, (FixedPoint, DigitStream)):
        return False
    x = as_real(x)
    return x.denominator <= DEGENERATE_DENOMINATOR


def _check_Ns(Ns: Sequence[int], D: DilationSequence, floor: int = 16) -> list[int]:
    Ns = [int(n) for n in Ns]
    if not Ns:
        raise ValueError("empty Ns")
    if min(Ns) < floor:
        raise ValueError(f"N >= {floor} required")
    if max(Ns) > len(D):
        raise ValueError(f"max N = {max(Ns)} exceeds the {len(D)} dilation terms")
    return Ns


def clt_experiment(D: DilationSequence, N: int, M: int, rng: RngSpec) -> CLTResult:
    """Empirical law of sum_{k<=N} cos(2 pi n_k x) / sqrt(N/2) over M uniform x.

    Each x carries enough bits that <n_k x> is exact to 2^-64.
    """
    if N > len(D):
        raise ValueError("N exceeds the dilation sequence")
    ratio = math.inf if N < 2 else float(hadamard_ratio(D.head(N)))
    terms = D.terms[:N]
    bits = max(64, terms[-1].bit_length() + 64)
    xs = sample_uniform(rng, M, bits)
    B = bits
    mask = (1 << B) - 1
    shift = max(0, B - 64)
    stats = np.empty(M)
    scale = 2.0 ** -64
    for i, x in enumerate(xs):
        m = x.mantissa
        ph = np.fromiter((((n * m) & mask) >> shift for n in terms), dtype=np.float64, count=N)
        stats[i] = np.sum(np.cos(2 * np.pi * ph * scale))
    stats /= math.sqrt(N / 2)
    cdf = EmpiricalCDF(stats)
    return CLTResult(cdf, cdf.ks_distance(), ratio > 1, ratio)


def lil_sum_trajectory(D: DilationSequence, x, Ns: Sequence[int], seed: int | None = None) -> TrajectoryReport:
    """|sum_{k<=N} cos 2 pi n_k x| normalized by sqrt(2 N log log N)."""
    Ns = _check_Ns(Ns, D)
    pts = dilated_points(D, x, max(Ns))
    partial = np.cumsum(np.cos(2 * np.pi * pts))
    raw = [abs(float(partial[n - 1])) for n in Ns]
    norm = [r / normalizer("lil", n) for r, n in zip(raw, Ns)]
    return TrajectoryReport(Ns, raw, norm, "lil", seed, _is_degenerate(x))


def _prefix_star(pts: np.ndarray, Ns: list[int], exact_pts=None) -> list:
    if exact_pts is not None:
        return [star_discrepancy(exact_pts[:n], exact=True) for n in Ns]
    return [star_discrepancy(pts[:n]) for n in Ns]


def _points(D, x, N):
    """Float points plus exact rationals when x is an exact rational."""
    if isinstance(x, (FixedPoint, DigitStream)):
        return dilated_points(D, x, N), None
    x = as_real(x)
    p, q = x.numerator, x.denominator
    exact = [Fraction((n * p) % q, q) for n in D.terms[:N]]
    return np.array([float(e) for e in exact]), exact


def lil_discrepancy_trajectory(D: DilationSequence, x, Ns: Sequence[int], seed: int | None = None) -> TrajectoryReport:
    """N D*_N(<n_1 x>, ..., <n_N x>) normalized by sqrt(2 N log log N)."""
    Ns = _check_Ns(Ns, D)
    pts, exact = _points(D, x, max(Ns))
    stars = _prefix_star(pts, Ns, exact)
    raw = [n * s for n, s in zip(Ns, stars)]
    norm = [float(r) / normalizer("lil", n) for r, n in zip(raw, Ns)]
    return TrajectoryReport(Ns, [float(r) for r in raw], norm, "lil", seed, _is_degenerate(x))


def fukuyama_constant(theta: int) -> float:
    """Almost-sure limsup of N D*_N / sqrt(2 N log log N) for <theta^k x>."""
    if theta < 2:
        raise ValueError("theta must be at least 2")
    if theta == 2:
        return math.sqrt(42) / 9
    if theta % 2 == 0:
        return math.sqrt((theta + 1) * theta * (theta - 2)) / (2 * math.sqrt((theta - 1) ** 3))
    return math.sqrt(theta + 1) / (2 * math.sqrt(theta - 1))


def fukuyama_band(theta: int, Ns: Sequence[int], rng: RngSpec, paths: int) -> list[TrajectoryReport]:
    """Discrepancy LIL trajectories of <theta^k x> for ``paths`` random x.

    Path i draws x from stream ``rng.stream + i``; x is given by random
    base-theta digits so <theta^k x> reads off a digit window.
    """
    Ns = sorted(int(n) for n in Ns)
    D = geometric_dilation(theta, max(Ns))
    out = []
    for i in range(paths):
        x = sample_digits(RngSpec(rng.seed, rng.stream + i), theta, max(Ns) + 128)
        out.append(lil_discrepancy_trajectory(D, x, Ns, seed=rng.seed))
    return out


def baker_ratio(D: DilationSequence, x, Ns: Sequence[int], eps: float, exponent: float = 1.5,
                seed: int | None = None) -> TrajectoryReport:
    """sqrt(N) D*_N normalized by (log N)^(exponent + eps)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if exponent not in (0.5, 1.5):
        raise ValueError("exponent must be 1/2 or 3/2")
    Ns = _check_Ns(Ns, D)
    pts, exact = _points(D, x, max(Ns))
    stars = _prefix_star(pts, Ns)
    raw = [math.sqrt(n) * float(s) for n, s in zip(Ns, stars)]
    norm = [r / math.log(n) ** (exponent + eps) for r, n in zip(raw, Ns)]
    kind = "baker" if exponent == 1.5 else "optimal"
    rep = TrajectoryReport(Ns, raw, norm, kind, seed, _is_degenerate(x))
    rep.params["eps"] = eps
    return rep
