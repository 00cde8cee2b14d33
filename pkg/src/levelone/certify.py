"""Grid verification of the induction step behind ``W <= chi``.

The functional

    Gamma(a0, a1) = min{ (1/4)(sqrt chi(a0) + sqrt chi(a1))^2 + (1/4)(a1 - a0)^2,
                         phi((a0 + a1)/2) } - chi((a0 + a1)/2)

must be nonpositive on ``{a0, a1 in [0, 0.4], (a0 + a1)/2 <= T}``.  This
module evaluates it on a fine grid, checks the three one-dimensional
endpoint sweeps that control ``d Gamma / d a1`` above T, and recomputes the
auxiliary constants of that argument.  Grid checks are evidence, not proof.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .bounds import chi, default_params, sqrt_chi
from .specfun import ProfileParams, gauss_iso_scaled, gauss_iso_scaled_deriv, outer_bound

REGION_MAX = 0.4
ZERO_TOL = 1e-9

# reference values the recomputed constants are compared against
REFERENCE_VALUES = {
    "w": (1.36971, 1e-4),
    "g_T": (1.02231, 1e-4),
    "gamma22_lower": (0.179822, 1e-5),
    "iso_deriv_gap": (-1.39698, 1e-4),
    "eta_bound": (-0.262693, 1e-5),
    "h_002": (-0.00549341, 1e-6),
    "h_prime_lower": (0.0544183, 1e-5),
    "inv_2sqrt_2T": (0.771517, 1e-5),
}


def _params(params):
    return params or default_params()


def gamma(a0, a1, params: ProfileParams | None = None):
    """Gamma(a0, a1); symmetric in its arguments."""
    p = _params(params)
    x0 = np.asarray(a0, dtype=float)
    x1 = np.asarray(a1, dtype=float)
    if np.any((x0 < 0) | (x0 > 1) | (x1 < 0) | (x1 > 1)):
        raise ValueError("Gamma arguments must lie in [0, 1]")
    mid = 0.5 * (x0 + x1)
    first = 0.25 * (sqrt_chi(x0, p) + sqrt_chi(x1, p)) ** 2 + 0.25 * (x1 - x0) ** 2
    out = np.minimum(first, outer_bound(mid, p.outer)) - chi(mid, p)
    return float(out) if out.ndim == 0 else out


def _dsqrt_chi(a, p: ProfileParams, above: bool = False):
    """Derivative of sqrt chi at a in (0, 1/2]; ``above`` takes the right limit at T."""
    a = np.asarray(a, dtype=float)
    low = (a < p.T) | ((a == p.T) & (not above))
    out = np.empty_like(a)
    if np.any(low):
        out[low] = gauss_iso_scaled_deriv(a[low], p.w)
    hi = ~low
    if np.any(hi):
        s = a[hi]
        if p.outer == "half":
            out[hi] = 1.0 / (2.0 * np.sqrt(2.0 * s))
        elif p.outer == "lp":
            r = np.sqrt(np.where(s <= 0.25, 1.0 / np.sqrt(s) - 1.0, np.nan))
            dlp = np.sqrt(2.0) * (r - 0.25 / (np.sqrt(s) * r))
            out[hi] = np.where(s <= 0.25, dlp, 1.0 / (2.0 * np.sqrt(2.0 * s)))
        else:
            raise ValueError(f"unknown outer bound {p.outer!r}")
    return out


def gamma2_prime(a0, a1, params: ProfileParams | None = None, above: bool = False):
    """Closed-form ``d Gamma / d a1`` of the smooth branch.

    Valid where the first term of the min is active and (a0 + a1)/2 <= T, so
    the subtracted chi is I_w^2.  For a1 <= T this is
    ``(1/2)(I_w(a0) + I_w(a1)) I_w'(a1) + (a1 - a0)/2 - I_w(m) I_w'(m)``; for
    a1 > T the factor ``I_w'(a1)`` becomes ``1/(2 sqrt(2 a1))``.  With
    ``above=True`` an argument equal to T uses the right-hand form.
    """
    p = _params(params)
    x0 = np.asarray(a0, dtype=float)
    x1 = np.asarray(a1, dtype=float)
    mid = 0.5 * (x0 + x1)
    if np.any(mid > p.T + 1e-15) or np.any(x1 <= 0) or np.any(x1 > 0.5):
        raise ValueError("gamma2_prime needs 0 < a1 <= 1/2 and (a0 + a1)/2 <= T")
    if np.any(mid <= 0):
        raise ValueError("gamma2_prime needs (a0 + a1)/2 > 0")
    out = (0.5 * (sqrt_chi(x0, p) + sqrt_chi(x1, p)) * _dsqrt_chi(x1, p, above)
           + 0.5 * (x1 - x0)
           - gauss_iso_scaled(mid, p.w) * gauss_iso_scaled_deriv(mid, p.w))
    return float(out) if out.ndim == 0 else out


def gamma12_second(a0, a1, params: ProfileParams | None = None):
    """Mixed derivative on [0, T]^2 in reduced form ``(g(a0)g(a1) - g(m)^2)/2``, g = I_w'."""
    p = _params(params)
    g = lambda x: gauss_iso_scaled_deriv(x, p.w)  # noqa: E731
    mid = 0.5 * (np.asarray(a0, dtype=float) + np.asarray(a1, dtype=float))
    return 0.5 * g(a0) * g(a1) - 0.5 * g(mid) ** 2


def gamma22_second(a0, a1, params: ProfileParams | None = None):
    """``d^2 Gamma / d a1^2`` for a1 > T: ``1 - I_w(a0)/(8 sqrt(2 a1^3)) - I_w'(m)^2 / 2``."""
    p = _params(params)
    x0 = np.asarray(a0, dtype=float)
    x1 = np.asarray(a1, dtype=float)
    mid = 0.5 * (x0 + x1)
    return (1.0 - gauss_iso_scaled(x0, p.w) / (8.0 * np.sqrt(2.0 * x1 ** 3))
            - 0.5 * gauss_iso_scaled_deriv(mid, p.w) ** 2)


def gamma222_third(a0, a1, params: ProfileParams | None = None):
    """``d^3 Gamma / d a1^3`` for a1 > T, using I_w I_w'' = -1.

    Equals ``3 I_w(a0) / (16 sqrt(2 a1^5)) + I_w'(m) / (2 I_w(m))``.
    """
    p = _params(params)
    x0 = np.asarray(a0, dtype=float)
    x1 = np.asarray(a1, dtype=float)
    mid = 0.5 * (x0 + x1)
    return (3.0 * gauss_iso_scaled(x0, p.w) / (16.0 * np.sqrt(2.0 * x1 ** 5))
            + gauss_iso_scaled_deriv(mid, p.w) / (2.0 * gauss_iso_scaled(mid, p.w)))


@dataclass
class CertReport:
    """Outcome of :func:`verify_region` plus the endpoint and constant checks."""

    region: str
    grid_step: float
    n_points: int
    max_gamma: float
    argmax: tuple[float, float]
    diagonal_max: float
    offdiag_max: float
    lemma5: dict[str, float] = field(default_factory=dict)
    appendix_constants: dict[str, float] = field(default_factory=dict)
    reference_match: dict[str, bool] = field(default_factory=dict)
    proof_conditions: dict[str, bool] = field(default_factory=dict)
    passed: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        d["argmax"] = list(self.argmax)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = [
            f"region: {self.region}",
            f"grid_step: {self.grid_step:.17g}",
            f"n_points: {self.n_points}",
            f"max_gamma: {self.max_gamma:.17g}",
            f"argmax: {self.argmax[0]:.17g}, {self.argmax[1]:.17g}",
            f"diagonal_max: {self.diagonal_max:.17g}",
            f"offdiag_max: {self.offdiag_max:.17g}",
        ]
        lines += [f"lemma5.{k}: {v:.17g}" for k, v in self.lemma5.items()]
        lines += [f"constant.{k}: {v:.17g}" for k, v in self.appendix_constants.items()]
        lines += [f"reference_match.{k}: {str(v).lower()}" for k, v in self.reference_match.items()]
        lines += [f"condition.{k}: {str(v).lower()}" for k, v in self.proof_conditions.items()]
        lines.append(f"pass: {str(self.passed).lower()}")
        return "\n".join(lines) + "\n"


def _region_rows(rows: np.ndarray, root: np.ndarray, chi_mid: np.ndarray, phi_mid: np.ndarray,
                 step: float, limit: int):
    """Evaluate Gamma for grid rows ``i in rows``, all columns j with i + j <= limit."""
    ncol = len(root)
    j = np.arange(ncol)
    best = (-np.inf, (0, 0))
    off = -np.inf
    diag = 0.0
    count = 0
    for i in rows:
        ok = j <= limit - i
        jj = j[ok]
        first = 0.25 * (root[i] + root[jj]) ** 2 + 0.25 * ((jj - i) * step) ** 2
        vals = np.minimum(first, phi_mid[i + jj]) - chi_mid[i + jj]
        count += len(jj)
        k = int(np.argmax(vals))
        if vals[k] > best[0]:
            best = (float(vals[k]), (int(i), int(jj[k])))
        if i <= limit - i:
            diag = max(diag, abs(float(vals[i])))
            rest = np.delete(vals, i) if len(vals) > i else vals
        else:
            rest = vals
        if len(rest):
            off = max(off, float(rest.max()))
    return best, off, diag, count


def verify_region(grid_step: float = 1e-3, params: ProfileParams | None = None,
                  region_max: float = REGION_MAX, threads: int | None = None) -> CertReport:
    """Evaluate Gamma on the grid ``{k * grid_step}`` of the constrained region."""
    p = _params(params)
    if not 0 < grid_step <= 1e-3:
        raise ValueError(f"grid_step={grid_step!r} must lie in (0, 1e-3]")
    if not REGION_MAX / 2 < p.T < REGION_MAX / 2 + 0.05:
        raise ValueError(f"T={p.T!r}: the region argument needs {REGION_MAX / 2:g} < T < {REGION_MAX / 2 + 0.05:g}")
    ncol = int(math.floor(region_max / grid_step + 1e-9)) + 1
    limit = int(math.floor(2 * p.T / grid_step + 1e-9))
    pts = np.arange(ncol) * grid_step
    root = sqrt_chi(pts, p)
    mids = np.arange(2 * ncol - 1) * (grid_step / 2)
    chi_mid = chi(np.minimum(mids, 1.0), p)
    phi_mid = outer_bound(np.minimum(mids, 1.0), p.outer)

    nchunk = max(1, min(64, ncol // 16))
    chunks = np.array_split(np.arange(ncol), nchunk)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda r: _region_rows(r, root, chi_mid, phi_mid, grid_step, limit), chunks))
    best, off, diag, count = (-np.inf, (0, 0)), -np.inf, 0.0, 0
    for b, o, d, c in parts:  # fixed chunk order keeps the argmax deterministic
        if b[0] > best[0]:
            best = b
        off = max(off, o)
        diag = max(diag, d)
        count += c

    report = CertReport(
        region=(f"a0, a1 in [0, {region_max:g}], (a0 + a1)/2 <= {p.T:g}; "
                f"T + sqrt(T/6) = {p.T + math.sqrt(p.T / 6):.6f}"),
        grid_step=grid_step,
        n_points=count,
        max_gamma=best[0],
        argmax=(best[1][0] * grid_step, best[1][1] * grid_step),
        diagonal_max=diag,
        offdiag_max=off,
    )
    report.lemma5 = lemma5_checks(p)
    report.appendix_constants = appendix_constants(p)
    report.reference_match = reference_match(report.appendix_constants) if p.outer == "half" else {}
    report.proof_conditions = proof_conditions(report.appendix_constants, p)
    report.passed = (report.max_gamma <= ZERO_TOL
                     and all(v <= ZERO_TOL for v in report.lemma5.values())
                     and all(report.proof_conditions.values()))
    return report


def lemma5_checks(params: ProfileParams | None = None, points: int = 20001) -> dict[str, float]:
    """Maxima of d Gamma / d a1 along the three sweeps bounding it above T.

    ``limit_above_T``: a0 in [0, T], a1 -> T from above (right-hand closed form).
    ``antidiagonal``: a0 in [0.02, T], a1 = 2T - a0.
    ``edge``: a0 in [0, 0.02], a1 = 0.4.
    """
    p = _params(params)
    split = 2 * p.T - REGION_MAX
    a0 = np.linspace(0.0, p.T, points)
    lim = gamma2_prime(a0, np.full_like(a0, p.T), p, above=True)
    a0 = np.linspace(split, p.T, points)
    anti = gamma2_prime(a0, 2 * p.T - a0, p, above=True)
    a0 = np.linspace(0.0, split, points)
    edge = gamma2_prime(a0, np.full_like(a0, REGION_MAX), p, above=True)
    return {
        "limit_above_T": float(lim.max()),
        "antidiagonal": float(anti.max()),
        "edge": float(edge.max()),
    }


def appendix_constants(params: ProfileParams | None = None, points: int = 20001) -> dict[str, float]:
    """Recompute the auxiliary constants of the region argument.

    All profile quantities are I_w and its derivative g = I_w'.  ``h_002`` is
    d Gamma / d a1 at (0.02, 0.4) = (0.02, 2T - 0.02); ``h_0`` is the same at
    a0 = 0.
    """
    p = _params(params)
    T, w = p.T, p.w
    g = lambda x: gauss_iso_scaled_deriv(x, w)  # noqa: E731
    iw = lambda x: gauss_iso_scaled(x, w)  # noqa: E731
    split = 2 * T - REGION_MAX
    gap = max(g(split) - 4.0 * math.sqrt(2.0 * (2 * T - split)), g(T) - 4.0 * math.sqrt(2.0 * T))
    a0 = np.linspace(split, T, points)
    eta = 2.0 * g(a0) * (2 * T - a0) + iw(a0) - 8.0 * math.sqrt(2.0) * (2 * T - a0) ** 1.5
    a0 = np.linspace(0.0, T, points)
    g22 = 1.0 - 0.5 * iw(a0) / (4.0 * np.sqrt(2.0 * (2 * T - a0) ** 3)) - 0.5 * g(T) ** 2
    a0 = np.linspace(0.0, split, points)[1:]
    mid = 0.5 * (a0 + REGION_MAX)
    hprime = g(a0) / (4.0 * math.sqrt(2.0 * REGION_MAX)) - 0.5 * g(mid) ** 2
    return {
        "w": w,
        "g_T": g(T),
        "gamma22_lower": 1.0 - 0.5 * iw(T) / (4.0 * math.sqrt(2.0 * T ** 3)) - 0.5 * g(T) ** 2,
        "gamma22_antidiagonal_min": float(g22.min()),
        "iso_deriv_gap": gap,
        "eta_bound": 2.0 * T * gap + iw(T),
        "eta_sweep_max": float(eta.max()),
        "h_002": gamma2_prime(split, REGION_MAX, p, above=True),
        "h_0": gamma2_prime(0.0, REGION_MAX, p, above=True),
        "h_prime_lower": g(split) / (4.0 * math.sqrt(2.0 * REGION_MAX))
                         - 0.5 * g(REGION_MAX / 2) ** 2,
        "h_prime_sweep_min": float(hprime.min()),
        "inv_2sqrt_2T": 1.0 / (2.0 * math.sqrt(2.0 * T)),
        "T_plus_sqrt_T6": T + math.sqrt(T / 6.0),
    }


def reference_match(constants: dict[str, float]) -> dict[str, bool]:
    """Whether each recomputed constant agrees with its reference value."""
    return {k: abs(constants[k] - v) <= tol for k, (v, tol) in REFERENCE_VALUES.items()}


def proof_conditions(c: dict[str, float], params: ProfileParams | None = None) -> dict[str, bool]:
    """The inequalities the region argument actually uses."""
    return {
        "g_T_at_least_1": c["g_T"] >= 1.0,
        "gamma22_lower_nonneg": c["gamma22_lower"] >= 0.0,
        "iso_deriv_gap_negative": c["iso_deriv_gap"] < 0.0,
        "eta_negative": c["eta_bound"] < 0.0 and c["eta_sweep_max"] < 0.0,
        "h_negative": c["h_002"] < 0.0 and c["h_0"] < 0.0,
        "h_prime_positive": c["h_prime_lower"] > 0.0 and c["h_prime_sweep_min"] > 0.0,
        "slope_gap": c["inv_2sqrt_2T"] <= c["g_T"],
        "region_covers": c["T_plus_sqrt_T6"] <= REGION_MAX,
    }
