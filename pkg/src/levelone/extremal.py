"""Ground truth for the maximal level-1 weight at small n.

Exhaustive search works with integer column sums: for a support A of size m,
``s_j = sum_{x in A} x_j`` gives ``4^n W_1 = sum_j s_j^2`` and
``2^n max_j |f_j| = max_j |s_j|``, so every comparison is exact.  Two
symmetries shrink the search: complementation (W is symmetric about 1/2) and
translation ``A -> A xor t``, which only flips signs of the s_j.  Every
support can be translated to contain point 0, so only those are enumerated
and the full maximizer set is recovered by translating back.
"""
from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

import numpy as np
from scipy import integrate, optimize, stats

from . import _core
from .boolfn import BoolFn, from_support, w1_exact

DEFAULT_MAX_N = 4
MAX_CAP = 10 ** 4


@dataclass
class ExtremalResult:
    """Exact maximum of W_1 over supports of size m in dimension n."""

    n: int
    m: int
    max_w1: Fraction | None
    maximizers: list[tuple[int, ...]] = field(default_factory=list)
    self_consistent: list[bool] = field(default_factory=list)
    truncated: bool = False
    beta: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.max_w1 is not None

    @property
    def a(self) -> Fraction:
        return Fraction(self.m, 1 << self.n)

    @property
    def max_w1_float(self) -> float:
        return float(self.max_w1) if self.max_w1 is not None else math.nan

    def functions(self) -> list[BoolFn]:
        return [from_support(self.n, s) for s in self.maximizers]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "a": str(self.a),
            "beta": None if self.beta is None else str(self.beta),
            "feasible": self.feasible,
            "max_w1": None if self.max_w1 is None else str(self.max_w1),
            "max_w1_float": None if self.max_w1 is None else float(self.max_w1),
            "maximizers": [list(s) for s in self.maximizers],
            "self_consistent": self.self_consistent,
            "truncated": self.truncated,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        d = self.to_dict()
        lines = [f"{k}: {d[k]}" for k in ("n", "m", "a", "beta", "feasible", "max_w1",
                                          "max_w1_float", "truncated")]
        lines.append(f"maximizer_count: {len(self.maximizers)}")
        lines.append(f"all_self_consistent: {str(all(self.self_consistent)).lower()}")
        lines += [f"maximizer: {' '.join(map(str, s))}" for s in self.maximizers]
        return "\n".join(lines) + "\n"


def _check_dims(n: int, m: int, allow_large: bool) -> None:
    if n < 0 or n > _core.MAX_SEARCH_DIM:
        raise ValueError(f"exhaustive search supports n <= {_core.MAX_SEARCH_DIM}, got n={n}")
    if n > DEFAULT_MAX_N:
        if not allow_large:
            raise ValueError(f"n={n} exceeds the default search cap {DEFAULT_MAX_N}; "
                             "pass allow_large=True to override")
        warnings.warn(f"exhaustive search at n={n} enumerates up to C({1 << n}, {m}) subsets "
                      "and may take minutes", RuntimeWarning, stacklevel=3)
    if not 0 <= m <= (1 << n):
        raise ValueError(f"support size m={m} outside [0, 2^{n}]")


def _bits_to_points(bits: int) -> tuple[int, ...]:
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


def _translate(bits: int, t: int) -> int:
    out = 0
    for p in _bits_to_points(bits):
        out |= 1 << (p ^ t)
    return out


def _run_search(n: int, m: int, fix_origin: bool, cap: int, target: int,
                threads: int | None) -> tuple[np.ndarray, list[int], bool]:
    """Split on the first free point, search chunks concurrently, merge in order."""
    npts = 1 << n
    k = m - 1 if (fix_origin and m > 0) else m
    start = 1 if (fix_origin and m > 0) else 0
    if k <= 0 or npts - start <= 1:
        return _core.subset_search(n, m, fix_origin, cap, target)
    bounds = [(p, p + 1) for p in range(start, npts - k + 1)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(
            lambda lh: _core.subset_search(n, m, fix_origin, cap, target, lh[0], lh[1]), bounds))
    table = np.full(m + 1, -1, dtype=np.int64)
    for t, _, _ in parts:
        np.maximum(table, t, out=table)
    best = int(table.max()) if target < 0 else int(table[target])
    masks: list[int] = []
    truncated = False
    if best < 0:
        return table, masks, False
    for t, ms, tr in parts:
        chunk_best = int(t.max()) if target < 0 else int(t[target])
        if chunk_best != best:
            continue
        truncated |= tr
        for b in ms:
            if len(masks) >= cap:
                truncated = True
                break
            masks.append(b)
    return table, masks, truncated


def _expand(n: int, masks: list[int], cap: int, complement: bool) -> tuple[list[tuple[int, ...]], bool]:
    """All translates of the origin-containing maximizers, sorted and deduplicated."""
    npts = 1 << n
    full = (1 << npts) - 1
    seen: set[int] = set()
    for b in masks:
        for t in range(npts):
            seen.add(_translate(b, t))
    out = sorted(seen)
    if complement:
        out = sorted(full ^ b for b in out)
    truncated = len(out) > cap
    return [_bits_to_points(b) for b in out[:cap]], truncated


def _search(n: int, m: int, cap: int, allow_large: bool, threads: int | None,
            prune: bool, beta: Fraction | None) -> ExtremalResult:
    _check_dims(n, m, allow_large)
    if not 1 <= cap <= MAX_CAP:
        raise ValueError(f"cap={cap} outside [1, {MAX_CAP}]")
    npts = 1 << n
    target = -1
    if beta is not None:
        scaled = Fraction(beta) * npts
        if beta < 0 or scaled.denominator != 1:
            raise ValueError(f"beta={beta} must be a nonnegative multiple of 2^-{n}")
        target = int(scaled)
    comp = prune and 2 * m > npts
    mm = npts - m if comp else m
    if target > mm:
        return ExtremalResult(n, m, None, beta=beta)
    table, masks, truncated = _run_search(n, mm, prune, cap, target, threads)
    best = int(table.max()) if target < 0 else int(table[target])
    if best < 0:
        return ExtremalResult(n, m, None, beta=beta)
    if prune:
        sets, trunc2 = _expand(n, masks, cap, comp)
        truncated = truncated or trunc2
    else:
        sets = [_bits_to_points(b) for b in sorted(masks)]
    res = ExtremalResult(n, m, Fraction(best, 4 ** n), sets, truncated=truncated, beta=beta)
    res.self_consistent = [self_consistency_check(from_support(n, s)) for s in sets]
    return res


def exact_max_w1(n: int, m: int, cap: int = MAX_CAP, allow_large: bool = False,
                 threads: int | None = None, prune: bool = True) -> ExtremalResult:
    """Exact ``W^(n)(m / 2^n)`` with every maximizer (up to ``cap``).

    ``n`` above 4 needs ``allow_large=True`` and emits a cost warning.
    ``prune=False`` enumerates all C(2^n, m) supports without symmetry
    reduction; it exists for cross-checking.
    """
    return _search(n, m, cap, allow_large, threads, prune, None)


def exact_max_w1_given_beta(n: int, m: int, beta, cap: int = MAX_CAP,
                            allow_large: bool = False, threads: int | None = None) -> ExtremalResult:
    """Exact maximum of W_1 among supports with ``max_i |f_i| == beta``.

    ``beta`` must be a multiple of 2^-n (``Fraction`` or ``"p/q"``).  An
    infeasible combination gives a result with ``feasible == False``.
    """
    return _search(n, m, cap, allow_large, threads, True, Fraction(beta))


def _linear_form(f: BoolFn) -> np.ndarray:
    """``2^n sum_j f_j x_j`` at every point, as integers."""
    s = f.column_sums()
    idx = np.arange(f.size)
    x = 1 - 2 * ((idx[:, None] >> np.arange(f.n)) & 1)
    return x @ s


def self_consistency_check(f: BoolFn) -> bool:
    """True iff supp f lies between the strict and weak halfspaces of its own level-1 part.

    Equivalently, ``min_{supp f} L >= max_{complement} L`` with
    ``L(x) = sum_j f_j x_j``.  Constant functions pass vacuously.
    """
    if f.count in (0, f.size):
        return True
    lin = _linear_form(f)
    return bool(lin[f.table].min() >= lin[~f.table].max())


def verify_maximizer_structure(n: int, m: int, **kw) -> bool:
    """Every maximizer of W_1 at (n, m) passes :func:`self_consistency_check`."""
    res = exact_max_w1(n, m, **kw)
    return all(res.self_consistent)


def sandwich_completions(f: BoolFn) -> list[BoolFn]:
    """All supports ``l`` of size |supp f| with ``{L > b} <= l <= {L >= b}``, b = min over supp f of L."""
    if f.count in (0, f.size):
        return [f]
    lin = _linear_form(f)
    b = lin[f.table].min()
    strict = np.flatnonzero(lin > b)
    level = np.flatnonzero(lin == b)
    need = f.count - len(strict)
    out = []
    for extra in combinations(level.tolist(), need):
        out.append(from_support(f.n, [*strict.tolist(), *extra]))
    return out


def sandwich_completion_check(n: int, m: int) -> bool:
    """Every sandwich completion of every maximizer is itself a maximizer."""
    res = exact_max_w1(n, m)
    for f in res.functions():
        for g in sandwich_completions(f):
            if w1_exact(g) != res.max_w1:
                return False
    return True


def monotonicity_table(n: int, **kw) -> list[tuple[int, Fraction]]:
    """Rows ``(m, W^(n)(m/2^n))`` for m = 1 .. 2^(n-1)."""
    return [(m, exact_max_w1(n, m, **kw).max_w1) for m in range(1, (1 << max(n - 1, 0)) + 1)]


def is_strictly_increasing(rows: list[tuple[int, Fraction]]) -> bool:
    return all(a[1] < b[1] for a, b in zip(rows, rows[1:]))


@dataclass
class LTFResult:
    """Best threshold-shaped support found by :func:`ltf_search`."""

    n: int
    m: int
    w1: Fraction
    weights: tuple[int, ...]
    support: tuple[int, ...]


def ltf_search(n: int, m: int, weight_cap: int) -> LTFResult:
    """Lower bound on ``W^(n)(m/2^n)`` from threshold functions.

    Weight vectors are nondecreasing, nonnegative, gcd-reduced integer
    vectors with entries at most ``weight_cap``.  For each, points are ranked
    by ``sum w_i x_i`` and the top m taken; ties on the boundary level go to
    the smallest point indices.  The first weight vector (lexicographic
    order) reaching the best value wins.
    """
    if not 1 <= n <= 16:
        raise ValueError(f"n={n} outside [1, 16]")
    if weight_cap < 1:
        raise ValueError("weight_cap must be >= 1")
    if not 0 <= m <= (1 << n):
        raise ValueError(f"support size m={m} outside [0, 2^{n}]")
    x = _points(n)
    best = None
    for w in combinations_with_replacement(range(weight_cap + 1), n):
        if math.gcd(*w) != 1:
            continue
        cand = _ltf_eval(x, m, w)
        if best is None or cand.w1 > best.w1:
            best = cand
    return best


def _points(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return (1 - 2 * ((idx[:, None] >> np.arange(n)) & 1)).astype(np.int64)


def _ltf_eval(x: np.ndarray, m: int, weights) -> LTFResult:
    n = x.shape[1]
    lin = x @ np.asarray(weights, dtype=np.int64)
    top = np.sort(np.argsort(-lin, kind="stable")[:m])
    s = x[top].sum(axis=0)
    return LTFResult(n, m, Fraction(int((s * s).sum()), 4 ** n), tuple(int(v) for v in weights),
                     tuple(int(p) for p in top))


def ltf_support(n: int, m: int, weights) -> LTFResult:
    """The size-m threshold support for one weight vector (same tie-break as :func:`ltf_search`)."""
    if len(weights) != n:
        raise ValueError(f"need {n} weights")
    if not 0 <= m <= (1 << n):
        raise ValueError(f"support size m={m} outside [0, 2^{n}]")
    return _ltf_eval(_points(n), m, weights)


# Euclidean setting: balls in R^d under the standard Gaussian measure.

@dataclass
class MCEstimate:
    """Monte-Carlo estimate with its standard error."""

    mean: float
    std_error: float
    samples: int
    seed: int
    radius: float = math.nan
    pairs: int = 0


MC_CHUNK = 1 << 16


def ball_measure(dim: int, center, radius: float) -> float:
    """Standard Gaussian measure of the ball ``{x : |x - center| <= radius}``."""
    c = np.asarray(center, dtype=float)
    nc = float(c @ c)
    r2 = radius * radius
    if nc == 0.0:
        return float(stats.chi2.cdf(r2, dim))
    return float(stats.ncx2.cdf(r2, dim, nc))


def ball_radius(dim: int, center, measure: float) -> float:
    """Radius of the ball around ``center`` with Gaussian measure ``measure``."""
    if not 0.0 < measure < 1.0:
        raise ValueError(f"measure={measure!r} outside (0, 1)")
    c = np.asarray(center, dtype=float)
    hi = math.sqrt(float(c @ c)) + math.sqrt(dim) + 10.0
    while ball_measure(dim, c, hi) < measure:
        hi *= 2.0
        if hi > 1e6:
            raise ValueError(f"no radius reaches measure {measure!r}")
    try:
        return float(optimize.brentq(lambda r: ball_measure(dim, c, r) - measure, 0.0, hi,
                                     xtol=1e-14, rtol=1e-14))
    except (ValueError, RuntimeError) as exc:
        raise ValueError(f"radius solve failed for measure {measure!r}: {exc}") from exc


def origin_ball_d2(dim: int, measure: float) -> float:
    """``2 E[|X|^2 | |X| <= t]`` for the centered ball of the given measure, by quadrature."""
    t2 = ball_radius(dim, np.zeros(dim), measure) ** 2
    num, _ = integrate.quad(lambda u: u * stats.chi2.pdf(u, dim), 0.0, t2, epsabs=1e-13, epsrel=1e-12)
    return 2.0 * num / measure


def _mc_chunk(seed_seq: np.random.SeedSequence, size: int, dim: int, c: np.ndarray, r2: float):
    rng = np.random.default_rng(seed_seq)
    x = rng.standard_normal((size, dim))
    inside = x[((x - c) ** 2).sum(axis=1) <= r2]
    half = len(inside) // 2
    d = inside[:half] - inside[half:2 * half]
    return (d * d).sum(axis=1)


def euclid_mc(dim: int, center, target_measure: float, samples: int, seed: int,
              threads: int | None = None) -> MCEstimate:
    """Monte-Carlo estimate of ``D^2(B) = E|X - Y|^2`` for X, Y uniform on a Gaussian ball.

    B is the ball around ``center`` of standard Gaussian measure
    ``target_measure``.  Accepted draws are split into disjoint pairs, so the
    estimate is a mean of i.i.d. terms.  Draws are made in fixed-size chunks,
    each with its own seed spawned from ``seed``; results do not depend on
    ``threads``.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if samples < 1000:
        raise ValueError("samples must be >= 1000")
    c = np.asarray(center, dtype=float)
    if c.shape != (dim,):
        raise ValueError(f"center must have length {dim}")
    radius = ball_radius(dim, c, target_measure)
    sizes = [MC_CHUNK] * (samples // MC_CHUNK)
    if samples % MC_CHUNK:
        sizes.append(samples % MC_CHUNK)
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda a: _mc_chunk(a[0], a[1], dim, c, radius * radius),
                              zip(seqs, sizes)))
    vals = np.concatenate(parts)
    if len(vals) < 2:
        raise ValueError("too few accepted samples for an error estimate")
    return MCEstimate(float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(len(vals))),
                      samples, seed, radius, len(vals))


__all__ = [
    "ExtremalResult", "LTFResult", "MCEstimate", "exact_max_w1", "exact_max_w1_given_beta",
    "self_consistency_check", "verify_maximizer_structure", "sandwich_completions",
    "sandwich_completion_check", "monotonicity_table", "is_strictly_increasing", "ltf_search",
    "ltf_support",
    "ball_measure", "ball_radius", "origin_ball_d2", "euclid_mc",
]
