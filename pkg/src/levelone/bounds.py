"""Upper and lower bounds on the maximal level-1 weight W(a).

Upper bounds: Chang's ``2a^2 ln(1/a)``, the linear-programming bound, the
profile bound ``chi`` (I_w^2 below the threshold T, ``phi`` above), its
beta-optimized refinement ``chi_tilde``, the finite-n entropy bound, and the
FKN-type bounds on W(1/2, beta).  Lower bounds: codimension-k subcubes and
Hamming balls (exact, and their Gaussian limit J = I^2).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .specfun import (
    ProfileParams,
    binary_entropy_inv,
    gauss_iso,
    gauss_iso_scaled,
    normal_quantile,
    outer_bound,
)

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
BETA_GRID = 2048


@lru_cache(maxsize=None)
def default_params() -> ProfileParams:
    """T = 0.21 with phi(t) = min(t, 1-t)/2; w is solved on first use."""
    return ProfileParams.from_threshold(0.21, "half")


def _prep(x):
    return np.asarray(x, dtype=float), np.ndim(x) == 0


def _out(arr, scalar):
    return float(arr) if scalar else arr


def _require(ok, msg):
    if not np.all(ok):
        raise ValueError(msg)


def chang_bound(a):
    """``2 a^2 ln(1/a)`` for 0 < a <= 1/2."""
    aa, scalar = _prep(a)
    _require((aa > 0) & (aa <= 0.5), f"a={a!r} outside (0, 1/2]")
    return _out(2.0 * aa * aa * np.log(1.0 / aa), scalar)


def lp_bound(a):
    """Linear-programming bound: ``2a^2(1/sqrt(a) - 1)`` up to 1/4, ``a/2`` above."""
    aa, scalar = _prep(a)
    _require((aa > 0) & (aa <= 0.5), f"a={a!r} outside (0, 1/2]")
    return _out(outer_bound(aa, "lp"), scalar)


def sqrt_chi(a, params: ProfileParams | None = None):
    """Square root of chi, extended to [0, 1] by chi(t) = chi(1 - t)."""
    p = params or default_params()
    aa, scalar = _prep(a)
    _require((aa >= 0) & (aa <= 1), f"a={a!r} outside [0, 1]")
    s = np.minimum(aa, 1.0 - aa)
    low = s <= p.T
    out = np.empty_like(s)
    if np.any(low):
        out[low] = gauss_iso_scaled(s[low], p.w)
    if np.any(~low):
        out[~low] = np.sqrt(outer_bound(s[~low], p.outer))
    return _out(out, scalar)


def chi(a, params: ProfileParams | None = None):
    """Profile bound: ``I_w(a)^2`` on [0, T], ``phi(a)`` on (T, 1/2], symmetric about 1/2."""
    r = sqrt_chi(a, params)
    return r * r


def khintchine_bound(beta):
    """Bound on W(1/2, beta) from the sharp Khintchine-type inequality."""
    b, scalar = _prep(beta)
    _require((b >= 0) & (b <= 0.5), f"beta={beta!r} outside [0, 1/2]")
    inner = np.sqrt(4.0 * (0.5 - INV_SQRT_2PI) * b + INV_SQRT_2PI ** 2)
    return _out(0.25 * (inner + INV_SQRT_2PI) ** 2, scalar)


def _split_term(a: float, beta, params: ProfileParams):
    """``(1/4)(sqrt chi(a+beta) + sqrt chi(a-beta))^2 + beta^2``."""
    beta = np.asarray(beta, dtype=float)
    up = sqrt_chi(np.minimum(a + beta, 1.0), params)
    down = sqrt_chi(np.maximum(a - beta, 0.0), params)
    return 0.25 * (up + down) ** 2 + beta * beta


def _golden_max(f, lo: float, hi: float, tol: float = 1e-13):
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - inv * (hi - lo)
    x2 = lo + inv * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def chi_tilde(a: float, params: ProfileParams | None = None) -> tuple[float, float]:
    """Beta-optimized bound; returns ``(value, beta_star)``.

    Maximizes ``min(split term, khintchine_bound)`` over beta in [0, a] on a
    uniform grid, then refines by golden section on the two cells around
    the best grid point.  Ties go to the smaller beta.
    """
    p = params or default_params()
    a = float(a)
    if not 0.0 <= a <= 0.5:
        raise ValueError(f"a={a!r} outside [0, 1/2]")
    if a == 0.0:
        return 0.0, 0.0

    def objective(beta):
        return np.minimum(_split_term(a, beta, p), khintchine_bound(np.clip(beta, 0.0, 0.5)))

    grid = np.linspace(0.0, a, BETA_GRID)
    vals = objective(grid)
    i = int(np.argmax(vals))
    best_beta, best_val = float(grid[i]), float(vals[i])
    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, BETA_GRID - 1)])
    rb, rv = _golden_max(lambda x: float(objective(x)), lo, hi)
    if rv > best_val + 1e-15:
        best_beta, best_val = rb, rv
    return best_val, best_beta


def strong_bound(n: int, a: float) -> float:
    """Finite-n bound ``n a^2 (1 - 2 H^{-1}(1 - log2(1/a)/n))^2``."""
    if n < 1:
        raise ValueError(f"n={n!r} must be >= 1")
    if not 0.0 < a <= 0.5:
        raise ValueError(f"a={a!r} outside (0, 1/2]")
    rate = math.log2(1.0 / a) / n
    if rate > 1.0:
        raise ValueError(f"a={a!r} below 2^-n for n={n}")
    p = binary_entropy_inv(1.0 - rate)
    return n * a * a * (1.0 - 2.0 * p) ** 2


def fkn_bound(beta: float, params: ProfileParams | None = None) -> float:
    """``beta^2 + chi(1/2 - beta)``, a bound on W(1/2, beta)."""
    if not 0.0 <= beta <= 0.5:
        raise ValueError(f"beta={beta!r} outside [0, 1/2]")
    return beta * beta + float(chi(0.5 - beta, params))


def subcube_w1(k: int) -> Fraction:
    """Level-1 weight ``k 4^-k`` of a codimension-k subcube (density 2^-k)."""
    if k < 0:
        raise ValueError(f"codimension k={k!r} must be >= 0")
    return Fraction(k, 4 ** k)


def ball_w1_limit(a):
    """Gaussian limit ``J(a) = I(a)^2`` of Hamming-ball level-1 weights."""
    r = gauss_iso(a)
    return r * r


def ball_w1_exact(k: int, r: int) -> Fraction:
    """Level-1 weight of the Hamming ball {sum x_i >= k - 2r} in dimension k."""
    if not 0 <= r < k:
        raise ValueError(f"radius r={r!r} outside [0, {k})")
    coeff = Fraction(math.comb(k - 1, r), 2 ** k)
    return k * coeff * coeff


def _log_iso(a: float) -> float:
    """ln I(a) for 0 < a < 1 without forming I(a) (avoids underflow)."""
    x = normal_quantile(a)
    return -0.5 * x * x - 0.5 * math.log(2.0 * math.pi)


def log_asymptotics(t: float, params: ProfileParams | None = None) -> tuple[float, float, float]:
    """``(ln chang, ln J, ln chi)`` evaluated at a = e^-t."""
    p = params or default_params()
    a = math.exp(-t)
    if not (a > 0.0 and a < p.T):
        raise ValueError(f"e^-t={a!r} must lie in (0, T={p.T})")
    ln_chang = -2.0 * t + math.log(2.0 * t)
    ln_j = 2.0 * _log_iso(a)
    ln_chi = 2.0 * (math.log(p.w) + _log_iso(a / p.w))
    return ln_chang, ln_j, ln_chi


def dyadic_codim(a: float) -> int | None:
    """k if a == 2^-k exactly (k >= 1), else None."""
    if not 0.0 < a < 1.0:
        return None
    k = round(-math.log2(a))
    return k if k >= 1 and math.ldexp(1.0, -k) == a else None


@dataclass
class BoundReport:
    """Named bound columns over a grid of densities."""

    grid: np.ndarray
    columns: dict[str, np.ndarray]
    beta_star: np.ndarray
    strong_n: int | None = None
    violations: list[float] = field(default_factory=list)

    @property
    def sandwich_ok(self) -> bool:
        return not self.violations

    def column_names(self) -> list[str]:
        return list(self.columns)

    def to_csv(self) -> str:
        names = self.column_names()
        lines = [",".join(["a", *names])]
        for i, a in enumerate(self.grid):
            cells = [f"{a:.17g}"]
            for name in names:
                v = self.columns[name][i]
                cells.append("" if np.isnan(v) else f"{v:.17g}")
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def bound_table(grid, params: ProfileParams | None = None, strong_n: int | None = 100,
                threads: int | None = None, tol: float = 1e-9) -> BoundReport:
    """Evaluate every bound on ``grid`` and check lower <= upper pointwise.

    The ``subcube`` column is filled only at a = 2^-k; ``strong_n{N}`` only
    where a >= 2^-N.  Grid points whose lower bound exceeds
    ``min(chi, chi_tilde) + tol`` are listed in ``violations``.
    """
    p = params or default_params()
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or not np.all((g > 0) & (g <= 0.5)):
        raise ValueError("grid must be a sequence of densities in (0, 1/2]")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        tilde = list(pool.map(lambda x: chi_tilde(float(x), p), g))
    cols: dict[str, np.ndarray] = {
        "chang": chang_bound(g),
        "lp": lp_bound(g),
        "chi": chi(g, p),
        "chi_tilde": np.array([t[0] for t in tilde]),
        "ball_J": ball_w1_limit(g),
    }
    if strong_n is not None:
        col = np.full(len(g), np.nan)
        for i, a in enumerate(g):
            if a >= 2.0 ** -strong_n:
                col[i] = strong_bound(strong_n, float(a))
        cols[f"strong_n{strong_n}"] = col
    sub = np.full(len(g), np.nan)
    for i, a in enumerate(g):
        k = dyadic_codim(float(a))
        if k is not None:
            sub[i] = float(subcube_w1(k))
    cols["subcube"] = sub
    for name, col in cols.items():
        finite = col[~np.isnan(col)]
        if np.any(finite < 0) or not np.all(np.isfinite(finite)):
            raise ArithmeticError(f"column {name} has negative or non-finite entries")
    lower = np.fmax(cols["ball_J"], sub)
    upper = np.minimum(cols["chi"], cols["chi_tilde"])
    violations = [float(a) for a, lo_, up in zip(g, lower, upper) if lo_ > up + tol]
    return BoundReport(g, cols, np.array([t[1] for t in tilde]), strong_n, violations)


def fkn_table(betas, params: ProfileParams | None = None) -> list[tuple[float, float, float]]:
    """Rows ``(beta, beta^2 + chi(1/2 - beta), khintchine_bound(beta))``."""
    return [(float(b), fkn_bound(float(b), params), khintchine_bound(float(b))) for b in betas]
