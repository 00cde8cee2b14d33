import json
import math

import numpy as np
import pytest

from levelone import certify as ct
from levelone.specfun import ProfileParams, gauss_iso_scaled_deriv


def region_sample(rng, size, params, avoid_kink=True):
    a0 = rng.uniform(0, 0.4, size * 4)
    a1 = rng.uniform(0.005, 0.4, size * 4)
    ok = (a0 + a1) / 2 <= params.T - 1e-4
    if avoid_kink:
        ok &= np.abs(a1 - params.T) > 1e-4
    return a0[ok][:size], a1[ok][:size]


def test_gamma_examples(params):
    for a in (0.0, 0.05, 0.1, params.T):
        assert abs(ct.gamma(a, a)) <= 1e-12
    assert ct.gamma(0.0, 0.0) == 0.0
    assert ct.gamma(0.1, 0.2) < 0
    with pytest.raises(ValueError):
        ct.gamma(-0.1, 0.2)


def test_gamma_symmetric(params):
    rng = np.random.default_rng(1)
    a0, a1 = rng.uniform(0, 1, 500), rng.uniform(0, 1, 500)
    assert np.array_equal(ct.gamma(a0, a1), ct.gamma(a1, a0))


def test_gamma2_prime_examples(params):
    for a in (0.02, 0.1, 0.2):
        assert abs(ct.gamma2_prime(a, a)) <= 1e-12
    assert ct.gamma2_prime(0.05, 0.15) <= 0
    h = 1e-6
    fd = (ct.gamma(0.1, 0.25 + h) - ct.gamma(0.1, 0.25 - h)) / (2 * h)
    assert ct.gamma2_prime(0.1, 0.25) == pytest.approx(fd, abs=1e-6)
    with pytest.raises(ValueError):
        ct.gamma2_prime(0.3, 0.3)


def test_gamma2_prime_matches_finite_differences(params):
    a0, a1 = region_sample(np.random.default_rng(2), 1000, params)
    assert len(a0) == 1000
    h = 1e-6
    fd = (ct.gamma(a0, a1 + h) - ct.gamma(a0, a1 - h)) / (2 * h)
    assert np.max(np.abs(fd - ct.gamma2_prime(a0, a1))) <= 1e-6


def test_gamma12_second(params):
    rng = np.random.default_rng(3)
    a0 = rng.uniform(0.01, params.T - 0.01, 300)
    a1 = rng.uniform(0.01, params.T - 0.01, 300)
    h = 1e-4
    g = ct.gamma
    fd = (g(a0 + h, a1 + h) - g(a0 + h, a1 - h) - g(a0 - h, a1 + h) + g(a0 - h, a1 - h)) / (4 * h * h)
    closed = ct.gamma12_second(a0, a1)
    assert np.max(np.abs(fd - closed)) <= 1e-5
    assert np.all(closed >= -1e-9)


def test_gamma22_second_and_third(params):
    T = params.T
    a0 = np.linspace(0.0, T, 400)
    a1 = np.linspace(T + 1e-3, 0.4, 400)
    A0, A1 = np.meshgrid(a0, a1)
    ok = A0 + A1 <= 2 * T
    third = ct.gamma222_third(A0[ok], A1[ok])
    assert np.all(third >= -1e-9)
    # both against finite differences of the closed-form first derivative
    x0, x1 = A0[ok][::50], A1[ok][::50]
    x1 = np.minimum(x1, 2 * T - x0 - 2e-5)
    keep = x1 > T + 2e-5
    x0, x1 = x0[keep], x1[keep]
    h = 1e-5
    d1 = lambda b: ct.gamma2_prime(x0, b, above=True)  # noqa: E731
    assert np.max(np.abs((d1(x1 + h) - d1(x1 - h)) / (2 * h) - ct.gamma22_second(x0, x1))) <= 1e-5
    d2 = lambda b: ct.gamma22_second(x0, b)  # noqa: E731
    assert np.max(np.abs((d2(x1 + h) - d2(x1 - h)) / (2 * h) - ct.gamma222_third(x0, x1))) <= 1e-4


def test_verify_region_default():
    rep = ct.verify_region(1e-3)
    assert rep.passed
    assert rep.max_gamma <= 1e-9
    assert rep.diagonal_max <= 1e-12
    assert rep.offdiag_max < 0
    assert rep.n_points == 88411
    assert rep.argmax[0] == rep.argmax[1]


def test_verify_region_deterministic_over_threads():
    a = ct.verify_region(1e-3, threads=1)
    b = ct.verify_region(1e-3, threads=8)
    assert a.to_json() == b.to_json()


def test_verify_region_rejects_coarse_grid():
    with pytest.raises(ValueError):
        ct.verify_region(0.01)


def test_lemma5_checks():
    vals = ct.lemma5_checks()
    assert set(vals) == {"limit_above_T", "antidiagonal", "edge"}
    assert all(v <= 1e-9 for v in vals.values())


def test_limit_matches_one_sided_difference(params):
    # right-hand slope at a1 = T from the smooth branch
    T = params.T
    for a0 in (0.0, 0.05, 0.2):
        h = 1e-7
        fd = (ct.gamma(a0, T + 2 * h) - ct.gamma(a0, T + h)) / h
        assert ct.gamma2_prime(a0, T, above=True) == pytest.approx(fd, abs=1e-5)


def test_appendix_constants_reference_values(params):
    c = ct.appendix_constants()
    assert c["g_T"] == pytest.approx(1.02231, abs=1e-4)
    assert c["gamma22_lower"] == pytest.approx(0.179822, abs=1e-5)
    assert c["gamma22_antidiagonal_min"] >= c["gamma22_lower"] - 1e-12
    assert c["iso_deriv_gap"] == pytest.approx(-1.39698, abs=1e-4)
    assert c["eta_bound"] == pytest.approx(-0.262693, abs=1e-5)
    assert c["eta_sweep_max"] <= -0.26
    assert c["h_prime_lower"] == pytest.approx(0.0544183, abs=1e-5)
    assert c["h_prime_sweep_min"] >= 0.0544
    assert c["inv_2sqrt_2T"] == pytest.approx(0.771517, abs=1e-5)
    assert c["T_plus_sqrt_T6"] == pytest.approx(0.397083, abs=1e-6)
    assert c["T_plus_sqrt_T6"] <= 0.4


def test_reference_h_value_is_the_zero_endpoint():
    c = ct.appendix_constants()
    assert c["h_0"] == pytest.approx(-0.00549341, abs=1e-8)
    assert c["h_002"] == pytest.approx(-0.0021000053, abs=1e-9)
    assert c["h_002"] < 0


def test_iso_gap_definition(params):
    T = params.T
    g = lambda a: gauss_iso_scaled_deriv(a, params.w)  # noqa: E731
    ref = max(g(0.02) - 4 * math.sqrt(2 * (2 * T - 0.02)), g(T) - 4 * math.sqrt(2 * T))
    assert ct.appendix_constants()["iso_deriv_gap"] == pytest.approx(ref, abs=1e-14)


def test_report_serialization():
    rep = ct.verify_region(1e-3)
    d = json.loads(rep.to_json())
    for key in ("region", "grid_step", "max_gamma", "argmax", "diagonal_max", "lemma5",
                "appendix_constants", "pass"):
        assert key in d
    assert d["pass"] is True
    text = rep.to_text()
    assert "pass: true" in text and "lemma5.edge:" in text
    assert all(": " in line for line in text.splitlines())
    assert d["reference_match"]["h_002"] is False
    assert all(v for k, v in d["reference_match"].items() if k != "h_002")


def test_lp_outer_variant_reports():
    p = ProfileParams.from_threshold(0.21, "lp")
    rep = ct.verify_region(1e-3, p)
    assert rep.reference_match == {}
    assert isinstance(rep.passed, bool)
    with pytest.raises(ValueError):
        ct.verify_region(1e-3, ProfileParams.from_threshold(0.2))
