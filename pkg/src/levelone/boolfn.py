"""Boolean functions on {-1,1}^n, their Fourier spectra and level weights.

Point convention, shared by every module: point index ``i`` in ``[0, 2^n)``
has ``x_{j+1} = +1`` when bit ``j`` of ``i`` is 0 and ``x_{j+1} = -1`` when it
is 1.  Frequency sets are bitmasks ``S`` in the same range, so
``chi_S(x(i)) = (-1)^{popcount(i & S)}`` and coordinate ``i`` (1-based) is
the mask ``1 << (i - 1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import _core

MAX_DIM = 24


def _popcounts(size: int) -> np.ndarray:
    return np.bitwise_count(np.arange(size, dtype=np.uint64)).astype(np.int64)


@dataclass(frozen=True, eq=False)
class BoolFn:
    """Truth table of f: {-1,1}^n -> {0,1}; ``table[i]`` is f at point i."""

    n: int
    table: np.ndarray

    def __post_init__(self):
        if not 0 <= self.n <= MAX_DIM:
            raise ValueError(f"dimension n={self.n} outside [0, {MAX_DIM}]")
        tab = np.asarray(self.table, dtype=bool)
        if tab.shape != (1 << self.n,):
            raise ValueError(f"table length {tab.shape} != 2^{self.n}")
        tab = tab.copy()
        tab.flags.writeable = False
        object.__setattr__(self, "table", tab)

    def __eq__(self, other):
        if not isinstance(other, BoolFn):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))

    def __repr__(self):
        return f"BoolFn(n={self.n}, support={self.support if self.count <= 8 else '...'})"

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def count(self) -> int:
        return int(self.table.sum())

    @property
    def mean(self) -> float:
        return self.count / self.size

    @property
    def mean_exact(self) -> Fraction:
        return Fraction(self.count, self.size)

    @property
    def support(self) -> list[int]:
        return np.flatnonzero(self.table).tolist()

    @property
    def mask(self) -> int:
        """Support as a Python int bitmask (bit i set iff f(i) = 1)."""
        return sum(1 << i for i in self.support)

    def column_sums(self) -> np.ndarray:
        """Integer vector ``s_j = sum_{x in supp f} x_j``; ``f_j = s_j / 2^n``."""
        pts = np.flatnonzero(self.table)
        bits = (pts[:, None] >> np.arange(self.n)) & 1
        return (len(pts) - 2 * bits.sum(axis=0)).astype(np.int64)

    def complement(self) -> "BoolFn":
        return BoolFn(self.n, ~self.table)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """All 2^n Fourier coefficients; ``coeffs[S] = E[f(X) chi_S(X)]``."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.float64).copy()
        if c.shape != (1 << self.n,):
            raise ValueError("coefficient vector must have length 2^n")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    def coordinate(self, i: int) -> float:
        """Level-1 coefficient of coordinate i (1-based)."""
        if not 1 <= i <= self.n:
            raise ValueError(f"coordinate {i} outside [1, {self.n}]")
        return float(self.coeffs[1 << (i - 1)])

    def level1(self) -> np.ndarray:
        return np.array([self.coeffs[1 << j] for j in range(self.n)])

    def level_weights(self) -> np.ndarray:
        """Vector ``W_0, ..., W_n``."""
        sq = self.coeffs ** 2
        return np.bincount(_popcounts(len(sq)), weights=sq, minlength=self.n + 1)


def from_support(n: int, points: Iterable[int]) -> BoolFn:
    """Indicator of a set of point indices."""
    if not 0 <= n <= MAX_DIM:
        raise ValueError(f"dimension n={n} outside [0, {MAX_DIM}]")
    table = np.zeros(1 << n, dtype=bool)
    for p in points:
        p = int(p)
        if not 0 <= p < (1 << n):
            raise ValueError(f"point index {p} out of range for n={n}")
        table[p] = True
    return BoolFn(n, table)


def from_mask(n: int, bits: int) -> BoolFn:
    """Indicator whose support is the set bits of ``bits``."""
    return from_support(n, (i for i in range(1 << n) if (bits >> i) & 1))


def from_predicate(n: int, pred) -> BoolFn:
    """Tabulate ``pred(x)`` for x a tuple of +-1 values (x[0] is x_1)."""
    idx = np.arange(1 << n)
    pts = 1 - 2 * ((idx[:, None] >> np.arange(n)) & 1)
    return BoolFn(n, np.array([bool(pred(tuple(int(v) for v in row))) for row in pts]))


def random_fn(n: int, m: int, seed: int) -> BoolFn:
    """Indicator of a uniformly random m-subset; deterministic in ``seed``."""
    if not 0 <= n <= MAX_DIM:
        raise ValueError(f"dimension n={n} outside [0, {MAX_DIM}]")
    if not 0 <= m <= (1 << n):
        raise ValueError(f"support size m={m} outside [0, 2^{n}]")
    rng = np.random.default_rng(seed)
    table = np.zeros(1 << n, dtype=bool)
    table[rng.choice(1 << n, size=m, replace=False)] = True
    return BoolFn(n, table)


def wht(f: BoolFn) -> Spectrum:
    """Fourier spectrum by the O(n 2^n) butterfly.

    The unnormalized sums are integers below 2^24, so every coefficient is
    exact in double precision.
    """
    raw = _core.wht(f.table.astype(np.float64))
    return Spectrum(f.n, raw / f.size)


def level_weight(s: Spectrum, k: int) -> float:
    """W_k: sum of squared coefficients over frequency sets of size k."""
    if not 0 <= k <= s.n:
        raise ValueError(f"level k={k} outside [0, {s.n}]")
    return float(s.level_weights()[k])


def w1_exact(f: BoolFn) -> Fraction:
    """Level-1 weight as an exact rational, ``sum_j s_j^2 / 4^n``."""
    s = f.column_sums()
    return Fraction(int((s * s).sum()), 4 ** f.n)


def avg_distance(f: BoolFn) -> float:
    """Mean Hamming distance of two independent uniform points of supp f.

    Pairs are ordered and drawn with replacement.  Coordinate j contributes
    ``2 c_j (|A| - c_j) / |A|^2`` where c_j counts support points with
    ``x_j = -1``.
    """
    return float(avg_distance_exact(f))


def avg_distance_exact(f: BoolFn) -> Fraction:
    size = f.count
    if size == 0:
        raise ValueError("average distance of an empty set is undefined")
    pts = np.flatnonzero(f.table)
    minus = ((pts[:, None] >> np.arange(f.n)) & 1).sum(axis=0)
    total = sum(2 * int(c) * (size - int(c)) for c in minus)
    return Fraction(total, size * size)


def check_wd_identity(f: BoolFn) -> float:
    """Residual ``|W_1 - a^2 (n - 2 D)|`` relating level-1 weight and average distance."""
    if f.count == 0:
        raise ValueError("identity needs a nonempty support")
    w1 = level_weight(wht(f), 1)
    a = f.mean
    return abs(w1 - a * a * (f.n - 2.0 * avg_distance(f)))


def decompose(f: BoolFn, i: int) -> tuple[BoolFn, BoolFn]:
    """Restrictions ``g = f|_{x_i=+1}`` and ``h = f|_{x_i=-1}`` on n-1 coordinates."""
    if not 1 <= i <= f.n:
        raise ValueError(f"coordinate {i} outside [1, {f.n}]")
    bit = 1 << (i - 1)
    idx = np.arange(1 << (f.n - 1))
    low = idx & (bit - 1)
    full = low | ((idx - low) << 1)
    return BoolFn(f.n - 1, f.table[full]), BoolFn(f.n - 1, f.table[full | bit])


def recompose(g: BoolFn, h: BoolFn, i: int) -> BoolFn:
    """Inverse of :func:`decompose`."""
    if g.n != h.n:
        raise ValueError("restrictions must share a dimension")
    n = g.n + 1
    bit = 1 << (i - 1)
    idx = np.arange(1 << n)
    low = idx & (bit - 1)
    sub = low | ((idx >> 1) & ~(bit - 1))
    table = np.where(idx & bit, h.table[sub], g.table[sub])
    return BoolFn(n, table)


def parse_support(text: str) -> list[int]:
    """Read one decimal point index per line (blank lines and ``#`` comments ignored)."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(int(line))
    return sorted(set(out))


def format_support(f: BoolFn) -> str:
    return "".join(f"{p}\n" for p in f.support)
