import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from levelone import changdim as cd
from levelone.boolfn import from_mask, from_predicate


def brute_spec(f, eps):
    n = f.n
    pts = list(product((1, -1), repeat=n))
    members = []
    for y in range(1 << n):
        c = sum(1 for i, x in enumerate(pts) if f.table[_index(x)]
                and math.prod(x[j] for j in range(n) if y >> j & 1) == 1)
        c -= sum(1 for x in pts if f.table[_index(x)]
                 and math.prod(x[j] for j in range(n) if y >> j & 1) == -1)
        if abs(Fraction(c, 1 << n)) > eps * f.mean_exact:
            members.append(y)
    return members


def _index(x):
    return sum(1 << j for j, v in enumerate(x) if v == -1)


def brute_rank(vectors, n):
    span = {0}
    for v in vectors:
        span |= {s ^ v for s in span}
    return int(math.log2(len(span)))


def brute_soft_ball_h1(k, a):
    # E[h X_1] for the soft ball with mean a, by enumeration
    sb = cd.soft_ball(k, a)
    tot = Fraction(0)
    for x in product((1, -1), repeat=k):
        s = sum(x)
        h = 1 if s > sb.b else (sb.lam if s == sb.b else 0)
        tot += h * x[0]
    assert sum(Fraction(1 if sum(x) > sb.b else (sb.lam if sum(x) == sb.b else 0))
               for x in product((1, -1), repeat=k)) / (1 << k) == Fraction(a)
    return tot / (1 << k)


def test_majority_spectrum():
    maj = from_predicate(3, lambda x: sum(x) > 0)
    sp = cd.spec_set(maj, Fraction(2, 5))
    assert sp.render() == ["000", "001", "010", "100", "111"]
    assert sp.dimension == 3
    assert cd.spec_set(maj, Fraction(51, 100)).dimension == 0
    assert cd.spec_set(maj, Fraction(51, 100)).members == (0,)
    assert cd.spec_set(maj, 1).members == ()


@given(st.integers(1, 255), st.sampled_from([Fraction(1, 10), Fraction(1, 4), Fraction(1, 3),
                                             Fraction(1, 2), Fraction(2, 3), Fraction(1)]))
def test_spec_set_brute(mask, eps):
    f = from_mask(3, mask)
    sp = cd.spec_set(f, eps)
    assert list(sp.members) == brute_spec(f, eps)
    assert sp.dimension == brute_rank(sp.members, 3)


def test_spec_set_boundary_is_strict():
    # dictator: |f(e_1)| = 1/2 = eps * a exactly at eps = 1
    f = from_predicate(3, lambda x: x[0] == 1)
    assert 1 in cd.spec_set(f, Fraction(99, 100)).members
    assert 1 not in cd.spec_set(f, 1).members


def test_spec_set_validation():
    with pytest.raises(ValueError):
        cd.spec_set(from_mask(2, 0), 0.5)
    with pytest.raises(ValueError):
        cd.spec_set(from_mask(2, 3), 0)
    with pytest.raises(ValueError):
        cd.spec_set(from_mask(2, 3), 1.5)


@given(st.lists(st.integers(0, 63), max_size=12))
def test_gf2_rank(vectors):
    r, basis = cd.gf2_rank(vectors, 6)
    assert r == brute_rank(vectors, 6) == len(basis)
    assert brute_rank(basis, 6) == r


def test_gf2_rank_rejects_wide_masks():
    with pytest.raises(ValueError):
        cd.gf2_rank([8], 3)


def test_format_mask():
    assert cd.format_mask(1, 3) == "001"
    assert cd.format_mask(4, 3) == "100"
    assert cd.format_mask(0, 0) == ""


def test_chang_dim_bound():
    assert cd.chang_dim_bound(0.125, 0.5) == pytest.approx(8 * math.log(8))
    assert cd.chang_dim_bound(1.0, 0.5) == 0.0
    with pytest.raises(ValueError):
        cd.chang_dim_bound(0.0, 0.5)


def test_lemma6_bound():
    assert cd.lemma6_bound(1 / 8, 0.5) == pytest.approx(12.9296, abs=1e-4)
    assert cd.lemma6_bound(0.5, 1.0) == pytest.approx(1.0, abs=1e-8)
    assert cd.lemma6_bound(1 / 8, 0.5) < cd.chang_dim_bound(1 / 8, 0.5)
    assert cd.lemma6_bound(1.0, 0.5) == 0.0


def test_soft_ball_examples():
    sb = cd.soft_ball(3, Fraction(1, 2))
    assert sb.b == 1 and sb.lam == 1
    assert cd.sharp_eps(3, Fraction(1, 2)) == Fraction(1, 2)
    assert cd.sharp_eps(1, Fraction(1, 2)) == 1
    sb = cd.soft_ball(2, Fraction(1, 8))
    assert sb.b == 2 and sb.lam == Fraction(1, 2)
    with pytest.raises(ValueError):
        cd.soft_ball(0, Fraction(1, 2))
    with pytest.raises(ValueError):
        cd.soft_ball(3, 0)


@given(st.integers(1, 8), st.fractions(Fraction(1, 1000), 1))
def test_soft_ball_coeff_brute(k, a):
    a = Fraction(a).limit_denominator(1000)
    if not 0 < a <= 1:
        return
    assert cd.soft_ball_coeff(cd.soft_ball(k, a)) == brute_soft_ball_h1(k, a)


def test_sharp_eps_decreasing_in_k():
    for a in (Fraction(1, 8), Fraction(1, 3), Fraction(1, 2)):
        vals = [cd.sharp_eps(k, a) for k in range(1, 16)]
        assert all(x >= y for x, y in zip(vals, vals[1:]))


def test_ball_eps():
    assert cd.ball_eps(5, 2) == Fraction(3, 8)
    assert cd.ball_eps(3, 0) == 1
    assert cd.ball_eps(3, 1) == Fraction(1, 2)
    assert cd.binom_le(5, 2) == 16
    assert cd.ball_density(5, 2) == Fraction(1, 2)
    with pytest.raises(ValueError):
        cd.ball_eps(3, 3)


def test_ball_eps_matches_sharp_eps():
    for k in range(1, 21):
        for r in range(k):
            assert cd.ball_eps(k, r) == cd.sharp_eps(k, cd.ball_density(k, r)), (k, r)


def test_hamming_ball_is_tight():
    # the ball {sum x >= k - 2r} has a k-dimensional spectrum just below ball_eps
    k, r = 4, 1
    f = from_predicate(k, lambda x: sum(x) >= k - 2 * r)
    e = cd.ball_eps(k, r)
    assert cd.spec_set(f, e - Fraction(1, 10 ** 6)).dimension == k
    assert cd.spec_set(f, e).dimension < k


def test_check_function_majority_passes():
    maj = from_predicate(3, lambda x: sum(x) > 0)
    assert cd.check_function(maj, [0.1, 0.3, 0.5]) == []


def test_exhaustive_small():
    grid = [0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9]
    assert cd.exhaustive_dim_check(2, grid)
    assert cd.exhaustive_dim_check(3, grid)


def test_exhaustive_n4_sample():
    assert cd.exhaustive_dim_check(4, [0.1, 0.3, 0.5, 0.8], samples=1500, seed=2)


def test_exhaustive_rejects_large_n():
    with pytest.raises(ValueError):
        cd.exhaustive_dim_check(5, [0.5])
