"""Scalar special functions used by the level-1 weight bounds.

Gaussian density, CDF and quantile; the Gaussian isoperimetric profile
``I(a) = phi(Phi^{-1}(a))`` and its scaled form ``I_w(a) = w I(a/w)``;
binary entropy (base 2) and its inverse; Bernoulli relative entropy
(natural log).

Every function accepts a scalar or an array and returns the same kind.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, log_ndtr

__all__ = [
    "ProfileParams",
    "normal_pdf",
    "normal_cdf",
    "normal_quantile",
    "gauss_iso",
    "gauss_iso_scaled",
    "gauss_iso_scaled_deriv",
    "outer_bound",
    "solve_w",
    "binary_entropy",
    "binary_entropy_inv",
    "kl_bernoulli",
    "upsilon",
]

SQRT2 = math.sqrt(2.0)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Acklam's rational approximation to the normal quantile (rel. error ~1.2e-9).
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _wrap(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


def _prep(x) -> tuple[np.ndarray, bool]:
    scalar = np.ndim(x) == 0
    return np.asarray(x, dtype=float), scalar


def _check_range(x: np.ndarray, lo: float, hi: float, name: str,
                 lo_open: bool = False, hi_open: bool = False) -> None:
    bad = ~np.isfinite(x)
    bad |= (x <= lo) if lo_open else (x < lo)
    bad |= (x >= hi) if hi_open else (x > hi)
    if np.any(bad):
        first = x[bad].flat[0] if x.ndim else float(x)
        lb = "(" if lo_open else "["
        rb = ")" if hi_open else "]"
        raise ValueError(f"{name}={first!r} outside {lb}{lo}, {hi}{rb}")


def normal_pdf(x):
    """Standard Gaussian density."""
    xa, scalar = _prep(x)
    return _wrap(INV_SQRT_2PI * np.exp(-0.5 * xa * xa), scalar)


def normal_cdf(x):
    """Standard Gaussian CDF, computed as ``erfc(-x/sqrt 2)/2``.

    Below x = -26 erfc underflows before the CDF does, so the far tail is
    ``exp(log Phi(x))``; ``normal_cdf(-38)`` is a positive subnormal.
    """
    xa, scalar = _prep(x)
    out = 0.5 * erfc(-xa / SQRT2)
    tail = xa < -26.0
    if np.any(tail):
        out = np.where(tail, np.exp(log_ndtr(np.where(tail, xa, 0.0))), out)
    return _wrap(out, scalar)


def _acklam_lower(q: np.ndarray) -> np.ndarray:
    """Initial guess for Phi^{-1}(q), 0 < q <= 1/2."""
    out = np.empty_like(q)
    tail = q < _P_LOW
    if np.any(tail):
        r = np.sqrt(-2.0 * np.log(q[tail]))
        num = ((((_C[0] * r + _C[1]) * r + _C[2]) * r + _C[3]) * r + _C[4]) * r + _C[5]
        den = (((_D[0] * r + _D[1]) * r + _D[2]) * r + _D[3]) * r + 1.0
        out[tail] = num / den
    mid = ~tail
    if np.any(mid):
        u = q[mid] - 0.5
        r = u * u
        num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * u
        den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        out[mid] = num / den
    return out


def normal_quantile(p):
    """Inverse of :func:`normal_cdf` on the open interval (0, 1).

    Rational first guess followed by two Newton steps against
    :func:`normal_cdf`; the result satisfies
    ``|Phi(x) - p| <= 1e-13 * max(p, 1 - p)``.
    """
    pa, scalar = _prep(p)
    _check_range(pa, 0.0, 1.0, "p", lo_open=True, hi_open=True)
    upper = pa > 0.5
    q = np.where(upper, 1.0 - pa, pa)
    x = _acklam_lower(q)
    for _ in range(2):
        dens = INV_SQRT_2PI * np.exp(-0.5 * x * x)
        step = np.where(dens > 0, (0.5 * erfc(-x / SQRT2) - q) / np.where(dens > 0, dens, 1.0), 0.0)
        x = x - step
    x = np.where(upper, -x, x)
    x = np.where(pa == 0.5, 0.0, x)
    return _wrap(x, scalar)


def gauss_iso(a):
    """Gaussian isoperimetric profile ``I(a) = phi(Phi^{-1}(a))``, with I(0)=I(1)=0."""
    aa, scalar = _prep(a)
    _check_range(aa, 0.0, 1.0, "a")
    inner = (aa > 0.0) & (aa < 1.0)
    out = np.zeros_like(aa)
    if np.any(inner):
        out[inner] = normal_pdf(normal_quantile(aa[inner]))
    return _wrap(out, scalar)


def gauss_iso_scaled(a, w: float):
    """Scaled profile ``I_w(a) = w * I(a / w)`` for 0 <= a <= w."""
    aa, scalar = _prep(a)
    if not w > 0:
        raise ValueError(f"w={w!r} must be positive")
    _check_range(aa, 0.0, w, "a")
    return _wrap(w * gauss_iso(np.minimum(aa / w, 1.0)), scalar)


def gauss_iso_scaled_deriv(a, w: float):
    """Derivative of I_w, which is ``-Phi^{-1}(a / w)``; requires 0 < a < w."""
    aa, scalar = _prep(a)
    _check_range(aa, 0.0, w, "a", lo_open=True, hi_open=True)
    return _wrap(-normal_quantile(aa / w), scalar)


def outer_bound(t, kind: str = "half"):
    """Crude upper bound ``phi`` on W used to close the profile at T.

    ``half`` is ``min(t, 1-t)/2``; ``lp`` is the linear-programming bound
    ``2s^2(1/sqrt(s) - 1)`` for s <= 1/4 and ``s/2`` above, with s = min(t, 1-t).
    """
    ta, scalar = _prep(t)
    _check_range(ta, 0.0, 1.0, "t")
    s = np.minimum(ta, 1.0 - ta)
    if kind == "half":
        out = s / 2.0
    elif kind == "lp":
        with np.errstate(divide="ignore", invalid="ignore"):
            low = 2.0 * s * s * (1.0 / np.sqrt(s) - 1.0)
        out = np.where(s <= 0.25, np.where(s > 0, low, 0.0), s / 2.0)
    else:
        raise ValueError(f"unknown outer bound {kind!r}")
    return _wrap(out, scalar)


def solve_w(T: float, target: float | None = None, bracket=(1.0, 2.0)) -> float:
    """Solve ``w * I(T / w) = target`` for w by bisection.

    ``target`` defaults to ``sqrt(T / 2)``.  The map w -> w I(T/w) is
    increasing, so a sign change on ``bracket`` pins the unique root.
    """
    if not 0.0 < T <= 0.25:
        raise ValueError(f"T={T!r} outside (0, 1/4]")
    if target is None:
        target = math.sqrt(T / 2.0)

    def resid(w):
        return w * gauss_iso(T / w) - target

    lo, hi = bracket
    rlo, rhi = resid(lo), resid(hi)
    if rlo == 0.0:
        return lo
    if rhi == 0.0:
        return hi
    if (rlo > 0) == (rhi > 0):
        raise ValueError(f"no sign change for w on [{lo}, {hi}] with T={T!r}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        rmid = resid(mid)
        if (rmid > 0) == (rhi > 0):
            hi, rhi = mid, rmid
        else:
            lo, rlo = mid, rmid
    w = lo if abs(rlo) <= abs(rhi) else hi
    r = resid(w)
    if abs(r) > 1e-12:
        raise ArithmeticError(f"solve_w residual {r:.3g} exceeds 1e-12")
    return w


@dataclass(frozen=True)
class ProfileParams:
    """Threshold ``T`` and scale ``w`` of the profile piece of the chi bound.

    ``outer`` names the crude bound ``phi`` that chi follows above T and
    that fixes w through ``I_w(T) = sqrt(phi(T))``.
    """

    T: float
    w: float
    outer: str = "half"

    def __post_init__(self):
        if not 0.0 < self.T <= 0.25:
            raise ValueError(f"T={self.T!r} outside (0, 1/4]")
        if not self.w > 0:
            raise ValueError(f"w={self.w!r} must be positive")
        r = self.w * gauss_iso(self.T / self.w) - math.sqrt(outer_bound(self.T, self.outer))
        if abs(r) > 1e-12:
            raise ValueError(f"w={self.w!r} does not solve I_w(T)=sqrt(phi(T)); residual {r:.3g}")

    @classmethod
    def from_threshold(cls, T: float = 0.21, outer: str = "half") -> "ProfileParams":
        target = math.sqrt(outer_bound(T, outer))
        return cls(T=T, w=solve_w(T, target=target), outer=outer)


def binary_entropy(p):
    """Binary entropy in bits, with H(0) = H(1) = 0."""
    pa, scalar = _prep(p)
    _check_range(pa, 0.0, 1.0, "p")
    inner = (pa > 0.0) & (pa < 1.0)
    out = np.zeros_like(pa)
    if np.any(inner):
        x = pa[inner]
        out[inner] = -(x * np.log2(x) + (1.0 - x) * np.log2(1.0 - x))
    return _wrap(out, scalar)


def binary_entropy_inv(y: float) -> float:
    """The unique p in [0, 1/2] with H(p) = y, by bisection to float resolution."""
    y = float(y)
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"y={y!r} outside [0, 1]")
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    while True:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if binary_entropy(mid) < y:
            lo = mid
        else:
            hi = mid
    return lo if abs(binary_entropy(lo) - y) <= abs(binary_entropy(hi) - y) else hi


def kl_bernoulli(p: float, q: float) -> float:
    """Relative entropy D(Bern(p) || Bern(q)) in nats."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p!r} outside [0, 1]")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q={q!r} outside [0, 1]")
    if q in (0.0, 1.0):
        if p == q:
            return 0.0
        raise ValueError(f"D(p||q) is infinite for q={q!r}, p={p!r}")
    out = 0.0
    if p > 0.0:
        out += p * math.log(p / q)
    if p < 1.0:
        out += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return max(out, 0.0)


def upsilon(b: float) -> float:
    """Smallest relative entropy to a fair coin at total-variation-type distance b."""
    if not 0.0 <= b <= 1.0:
        raise ValueError(f"b={b!r} outside [0, 1]")
    return kl_bernoulli((1.0 - b) / 2.0, 0.5)
