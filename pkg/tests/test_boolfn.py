from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from levelone import boolfn as bf


def brute_coeffs(f):
    idx = np.arange(f.size)
    out = []
    for S in range(f.size):
        signs = (-1.0) ** np.bitwise_count(idx & S)
        out.append((f.table * signs).sum() / f.size)
    return np.array(out)


def maj3():
    return bf.from_predicate(3, lambda x: sum(x) > 0)


@st.composite
def boolfns(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    bits = draw(st.lists(st.booleans(), min_size=1 << n, max_size=1 << n))
    return bf.BoolFn(n, np.array(bits))


def test_from_support_basics():
    d = bf.from_support(1, {0})
    assert d.mean == 0.5 and d.support == [0]
    assert bf.from_support(2, []).mean == 0
    assert bf.from_support(3, range(8)).mean == 1
    with pytest.raises(ValueError):
        bf.from_support(2, [4])
    with pytest.raises(ValueError):
        bf.BoolFn(2, np.zeros(3, dtype=bool))
    with pytest.raises(ValueError):
        bf.from_support(25, [])


def test_boolfn_is_immutable_and_hashable():
    f = maj3()
    with pytest.raises(ValueError):
        f.table[0] = True
    assert f == maj3() and hash(f) == hash(maj3())
    assert f != f.complement()


def test_point_convention():
    # point 1 has x_1 = -1, others +1
    f = bf.from_predicate(2, lambda x: x[0] == -1 and x[1] == 1)
    assert f.support == [1]
    assert bf.from_mask(3, 0b101).support == [0, 2]


def test_wht_examples():
    s = bf.wht(bf.from_support(1, {0}))
    assert list(s.coeffs) == [0.5, 0.5]
    s = bf.wht(maj3())
    assert s.coeffs[0] == 0.5
    assert [s.coordinate(i) for i in (1, 2, 3)] == [0.25, 0.25, 0.25]
    assert s.coeffs[0b111] == -0.25
    assert not bf.wht(bf.from_support(3, [])).coeffs.any()


@given(boolfns())
def test_wht_matches_definition(f):
    assert np.array_equal(bf.wht(f).coeffs, brute_coeffs(f))


def test_level_weights():
    s = bf.wht(maj3())
    assert bf.level_weight(s, 1) == 3 / 16
    assert bf.level_weight(s, 0) == 0.25
    cube = bf.from_predicate(6, lambda x: x[0] == x[1] == x[2] == 1)
    assert bf.level_weight(bf.wht(cube), 1) == 3 / 64
    with pytest.raises(ValueError):
        bf.level_weight(s, 4)


def test_parseval_random():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(1, 11))
        f = bf.random_fn(n, int(rng.integers(0, (1 << n) + 1)), int(rng.integers(1 << 30)))
        s = bf.wht(f)
        assert abs((s.coeffs ** 2).sum() - f.mean) <= 1e-12
        assert abs(s.level_weights().sum() - f.mean) <= 1e-12
        assert abs(s.coeffs[0] - f.mean) <= 1e-14


def test_wht_involution():
    from levelone import _core

    rng = np.random.default_rng(3)
    v = rng.standard_normal(1 << 12)
    assert np.max(np.abs(_core.wht(_core.wht(v)) - (1 << 12) * v)) <= 1e-10


def test_w1_exact():
    assert bf.w1_exact(maj3()) == Fraction(3, 16)
    f = bf.random_fn(7, 50, 5)
    assert float(bf.w1_exact(f)) == pytest.approx(bf.level_weight(bf.wht(f), 1), abs=1e-15)


def test_avg_distance_examples():
    assert bf.avg_distance(bf.from_support(3, [5])) == 0
    assert bf.avg_distance(bf.from_support(3, [0, 3])) == 1
    assert bf.avg_distance(bf.from_support(4, range(16))) == 2
    with pytest.raises(ValueError):
        bf.avg_distance(bf.from_support(2, []))


def test_avg_distance_brute_force():
    f = bf.random_fn(5, 9, 11)
    pts = f.support
    tot = sum(bin(p ^ q).count("1") for p in pts for q in pts)
    assert bf.avg_distance_exact(f) == Fraction(tot, len(pts) ** 2)


def test_wd_identity_examples():
    assert bf.check_wd_identity(bf.from_support(3, [0])) == 0
    assert bf.check_wd_identity(maj3()) == 0
    assert bf.check_wd_identity(bf.random_fn(8, 77, 1)) <= 1e-12


@given(boolfns(max_n=8))
def test_wd_identity_property(f):
    if f.count:
        assert bf.check_wd_identity(f) <= 1e-12


def test_decompose_examples():
    g, h = bf.decompose(bf.from_support(1, {0}), 1)
    assert g.mean == 1 and h.mean == 0
    g, h = bf.decompose(maj3(), 3)
    assert g.mean == 0.75 and h.mean == 0.25
    assert g == bf.from_predicate(2, lambda x: max(x) > 0)
    assert h == bf.from_predicate(2, lambda x: min(x) > 0)
    with pytest.raises(ValueError):
        bf.decompose(maj3(), 4)


@given(boolfns(), st.data())
def test_decompose_identities(f, data):
    i = data.draw(st.integers(1, f.n))
    g, h = bf.decompose(f, i)
    assert bf.recompose(g, h, i) == f
    assert abs(f.mean - (g.mean + h.mean) / 2) <= 1e-15
    fs, gs, hs = bf.wht(f), bf.wht(g), bf.wht(h)
    assert abs(fs.coordinate(i) - (g.mean - h.mean) / 2) <= 1e-13
    others = [j for j in range(1, f.n + 1) if j != i]
    for pos, j in enumerate(others, start=1):
        assert abs(fs.coordinate(j) - (gs.coordinate(pos) + hs.coordinate(pos)) / 2) <= 1e-13


def test_random_fn():
    assert bf.random_fn(3, 0, 1).count == 0
    assert bf.random_fn(3, 8, 1).count == 8
    assert bf.random_fn(4, 5, 42) == bf.random_fn(4, 5, 42)
    with pytest.raises(ValueError):
        bf.random_fn(3, 9, 1)


def test_support_text_roundtrip():
    f = bf.random_fn(5, 12, 2)
    text = bf.format_support(f)
    assert bf.from_support(5, bf.parse_support(text)) == f
    assert bf.parse_support("3\n\n# note\n1  # x\n3\n") == [1, 3]


def test_column_sums_match_coefficients():
    f = bf.random_fn(6, 20, 9)
    s = f.column_sums()
    assert np.allclose(s / 64, bf.wht(f).level1(), atol=0)
