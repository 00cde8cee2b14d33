"""Dimension of the large spectrum over GF(2) and the sharp form of Chang's lemma.

``Spec_eps(f) = {y : |f(y)| > eps * E f}``; its span over GF(2) is bounded by
Chang's ``2 eps^-2 ln(1/a)`` and by ``W(a) / (a^2 eps^2)``.  The sharp bound
uses the soft Hamming ball ``h = 1{sum x_i > b} + lam 1{sum x_i = b}`` on k
coordinates: any f with mean a and a k-dimensional spectrum has
``eps < h_1 / a``.  All soft-ball quantities are exact rationals.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .boolfn import BoolFn, from_mask, wht
from .bounds import chi, chi_tilde, default_params
from .specfun import ProfileParams


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def format_mask(mask: int, n: int) -> str:
    """Binary string with coordinate n first."""
    return format(mask, f"0{n}b") if n else ""


def gf2_rank(vectors: Iterable[int], n: int) -> tuple[int, list[int]]:
    """Rank over GF(2) and a maximal independent subset of the input masks."""
    pivots: dict[int, int] = {}
    basis = []
    for v in vectors:
        v = int(v)
        if v < 0 or v >> n:
            raise ValueError(f"mask {v} does not fit in {n} bits")
        r = v
        while r:
            top = r.bit_length() - 1
            if top not in pivots:
                pivots[top] = r
                basis.append(v)
                break
            r ^= pivots[top]
    return len(basis), basis


@dataclass(frozen=True)
class SpecSet:
    """Frequencies with ``|f(y)| > eps * E f`` and the GF(2) dimension of their span."""

    n: int
    epsilon: Fraction
    members: tuple[int, ...]
    dimension: int
    basis: tuple[int, ...]

    def render(self) -> list[str]:
        return [format_mask(y, self.n) for y in self.members]


def spec_set(f: BoolFn, epsilon) -> SpecSet:
    """Large spectrum of f, compared exactly.

    ``2^n f(y)`` is an integer, so membership is ``|2^n f(y)| > eps |supp f|``
    evaluated in rationals.  The zero frequency belongs whenever eps < 1.
    """
    eps = _frac(epsilon)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon={epsilon!r} outside (0, 1]")
    if f.count == 0:
        raise ValueError("large spectrum of the zero function is undefined")
    raw = np.rint(wht(f).coeffs * f.size).astype(np.int64)
    members = tuple(int(y) for y in np.flatnonzero(np.abs(raw) * eps.denominator
                                                  > eps.numerator * f.count))
    dim, basis = gf2_rank(members, f.n)
    return SpecSet(f.n, eps, members, dim, tuple(basis))


def chang_dim_bound(a: float, epsilon: float) -> float:
    """``2 eps^-2 ln(1/a)``."""
    a, epsilon = float(a), float(epsilon)
    if not 0.0 < a <= 1.0:
        raise ValueError(f"a={a!r} outside (0, 1]")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon={epsilon!r} outside (0, 1]")
    return 2.0 * math.log(1.0 / a) / (epsilon * epsilon)


@lru_cache(maxsize=4096)
def _w_upper(a: float, params: ProfileParams) -> float:
    s = min(a, 1.0 - a)
    if s <= 0.0:
        return 0.0
    return min(float(chi(s, params)), chi_tilde(s, params)[0])


def lemma6_bound(a: float, epsilon: float, params: ProfileParams | None = None) -> float:
    """``min(chi, chi_tilde)(min(a, 1-a)) / (a^2 eps^2)``, a bound on the spectrum dimension."""
    p = params or default_params()
    a, epsilon = float(a), float(epsilon)
    if not 0.0 < a <= 1.0:
        raise ValueError(f"a={a!r} outside (0, 1]")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon={epsilon!r} outside (0, 1]")
    return _w_upper(a, p) / (a * a * epsilon * epsilon)


@dataclass(frozen=True)
class SoftBall:
    """``h = 1{sum x_i > b} + lam 1{sum x_i = b}`` on k coordinates with ``E h = a``."""

    k: int
    b: int
    lam: Fraction
    a: Fraction


def _level_prob(k: int, s: int) -> Fraction:
    return Fraction(math.comb(k, (k - s) // 2), 1 << k)


def soft_ball(k: int, a) -> SoftBall:
    """The unique soft ball with mean a: ``P(sum > b) < a <= P(sum >= b)``."""
    a = _frac(a)
    if not 1 <= k <= 64:
        raise ValueError(f"k={k} outside [1, 64]")
    if not 0 < a <= 1:
        raise ValueError(f"a={a} outside (0, 1]")
    above = Fraction(0)
    for s in range(k, -k - 1, -2):
        p = _level_prob(k, s)
        if above < a <= above + p:
            return SoftBall(k, s, (a - above) / p, a)
        above += p
    raise AssertionError("level probabilities do not sum to 1")


def soft_ball_coeff(sb: SoftBall) -> Fraction:
    """Common level-1 coefficient ``E[h(X) X_1]`` of the soft ball."""
    k, b = sb.k, sb.b
    tot = Fraction(0)
    for s in range(k, b, -2):
        tot += s * _level_prob(k, s)
    tot += sb.lam * b * _level_prob(k, b)
    return tot / k


def sharp_eps(k: int, a) -> Fraction:
    """``h_1 / a``: f with mean a and a k-dimensional large spectrum needs eps below this."""
    sb = soft_ball(k, a)
    return soft_ball_coeff(sb) / sb.a


def binom_le(k: int, r: int) -> int:
    """``C(k, 0) + C(k, 1) + ... + C(k, r)``."""
    return sum(math.comb(k, j) for j in range(r + 1))


def ball_density(k: int, r: int) -> Fraction:
    """Density ``2^-k C(k, <=r)`` of the ball ``{sum x_i >= k - 2r}``."""
    return Fraction(binom_le(k, r), 1 << k)


def ball_eps(k: int, r: int) -> Fraction:
    """``C(k-1, r) / C(k, <=r)``, the sharp eps at the Hamming-ball densities."""
    if not 0 <= r < k:
        raise ValueError(f"radius r={r} outside [0, {k})")
    return Fraction(math.comb(k - 1, r), binom_le(k, r))


def _ball_radius_for(k: int, a: Fraction) -> int | None:
    for r in range(k):
        if ball_density(k, r) == a:
            return r
    return None


def check_function(f: BoolFn, eps_grid: Sequence[float], params: ProfileParams | None = None) -> list[str]:
    """Dimension-bound violations for one function; empty when all checks hold."""
    p = params or default_params()
    a = f.mean_exact
    af = float(a)
    bad = []
    for eps in eps_grid:
        sp = spec_set(f, eps)
        d = sp.dimension
        if d > chang_dim_bound(af, eps) + 1e-9:
            bad.append(f"chang: mask={f.mask} eps={eps} dim={d}")
        if d > lemma6_bound(af, eps, p) + 1e-9:
            bad.append(f"lemma6: mask={f.mask} eps={eps} dim={d}")
        if d >= 1 and not _frac(eps) < sharp_eps(d, a):
            bad.append(f"sharp: mask={f.mask} eps={eps} dim={d}")
        for k in range(1, f.n + 1):
            r = _ball_radius_for(k, a)
            if r is not None and _frac(eps) >= ball_eps(k, r) and d >= k:
                bad.append(f"ball: mask={f.mask} eps={eps} dim={d} k={k}")
    return bad


def exhaustive_dim_check(n: int, eps_grid: Sequence[float], samples: int = 10_000, seed: int = 7,
                         params: ProfileParams | None = None, threads: int | None = None) -> bool:
    """Check every dimension bound on all nonzero functions (n <= 3) or a random sample (n = 4).

    For each f and eps: the span dimension d obeys Chang's bound and the
    ``W(a)/(a^2 eps^2)`` bound, ``eps < sharp_eps(d, a)`` when d >= 1, and
    ``d < k`` whenever a is a ball density ``2^-k C(k, <=r)`` with
    ``eps >= ball_eps(k, r)``.
    """
    p = params or default_params()
    if n <= 3:
        masks = np.arange(1, 1 << (1 << n), dtype=np.int64)
    elif n == 4:
        rng = np.random.default_rng(seed)
        masks = rng.integers(1, 1 << 16, size=samples, dtype=np.int64)
    else:
        raise ValueError("exhaustive_dim_check supports n <= 4")
    chunks = np.array_split(masks, max(1, min(32, len(masks) // 64)))

    def run(chunk):
        return all(not check_function(from_mask(n, int(mk)), eps_grid, p) for mk in chunk)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return all(list(pool.map(run, chunks)))
