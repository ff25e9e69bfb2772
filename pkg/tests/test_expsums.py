import cmath
import math

import numpy as np
import pytest

from invsum import build_context
from invsum.expsums import (
    RootOfUnity,
    cosecant_sum,
    double_exp_sum,
    double_exp_tables,
    incomplete_kloosterman,
    incomplete_kloosterman_profile,
    kloosterman,
    kloosterman_row,
    lemma1_check,
    lemma2_sum,
    lemma3_row,
    lemma3_sum,
    lemma_tables,
    recip_one_minus_e,
    recip_table,
    triple_exp_sum,
    triple_exp_tables,
    weighted_inverse_exp_sum,
    weighted_inverse_table,
)

from oracles import D_grid, T_grid, e, kloosterman_literal


def test_root_of_unity():
    z = RootOfUnity(5, 7)
    assert abs(z.value - e(2 / 5)) < 1e-15
    assert RootOfUnity(5, 10).is_trivial and not z.is_trivial


def test_lemma1_examples():
    lhs, rhs = lemma1_check(3, 1)
    assert abs(rhs - (-3 / (1 - e(1 / 3)))) < 1e-12
    assert abs(lhs - rhs) < 1e-12
    lhs, rhs = lemma1_check(5, 2)
    assert abs(lhs - rhs) < 1e-10
    for k in range(1, 11):
        assert abs(lemma1_check(11, 11 - k)[0] - lemma1_check(11, k)[0].conjugate()) < 1e-12
    with pytest.raises(ValueError):
        lemma1_check(7, 14)


@pytest.mark.parametrize("p,expected,tol", [(5, 2, 1e-12), (3, 1, 1e-12), (101, 50, 1e-9)])
def test_lemma2_examples(p, expected, tol):
    for k in (1, 2, p - 1):
        z = lemma2_sum(p, k)
        assert abs(z - expected) < tol


@pytest.mark.parametrize("p,d,expected", [(5, 2, 0), (7, 3, 0), (7, 1, 2)])
def test_lemma3_examples(p, d, expected):
    for k in range(1, p):
        assert abs(lemma3_sum(p, k, d) - expected) < 1e-12
    with pytest.raises(ValueError):
        lemma3_sum(p, 1, p)
    with pytest.raises(ValueError):
        lemma3_sum(p, 1, 0)


@pytest.mark.parametrize("p", [3, 7, 61, 211])
def test_lemma_tables_match_pointwise(p):
    ctx = build_context(p)
    tabs = lemma_tables(ctx)
    for k in (1, 2, p - 1):
        assert abs(tabs["lemma1"][k] - lemma1_check(p, k)[0]) < 1e-9 * p * p
        assert abs(tabs["lemma2"][k] - lemma2_sum(p, k)) < 1e-9 * p
        row = lemma3_row(ctx, 2 % (p - 1) + 1)
        assert abs(row[k] - lemma3_sum(p, k, 2 % (p - 1) + 1)) < 1e-9 * p


def test_recip_matches_naive():
    for p in (3, 13, 997):
        r = recip_table(p)
        m = np.arange(1, p)
        naive = 1 / (1 - np.exp(2j * np.pi * m / p))
        assert np.abs(r[1:] - naive).max() < 1e-10 * p
        assert recip_one_minus_e(p - 1, p) == pytest.approx(complex(r[p - 1]), abs=1e-15)
    # 1/(1 - e(-k/p)) is the conjugate of 1/(1 - e(k/p))
    assert abs(recip_one_minus_e(-1, 7) - 1 / (1 - e(-1 / 7))) < 1e-14
    with pytest.raises(ValueError):
        recip_one_minus_e(0, 7)


def test_kloosterman_examples():
    ctx = build_context(5)
    assert abs(kloosterman(ctx, 1, 1) - (2 + 2 * math.cos(4 * math.pi / 5))) < 1e-12
    assert abs(kloosterman(ctx, 1, 1) - 0.381966) < 1e-6
    for p in (5, 13, 101):
        c = build_context(p)
        for b in (1, 2, p - 1):
            assert abs(kloosterman(c, 0, b) + 1) < 1e-12
        for a, b in [(1, 2), (3, 7), (p - 1, 5)]:
            assert abs(kloosterman(c, a, b) - kloosterman(c, b, a)) < 1e-10


@pytest.mark.parametrize("p", [3, 11, 37])
def test_kloosterman_row_against_literal(p):
    ctx = build_context(p)
    for a in (0, 1, 2, p - 1):
        row = kloosterman_row(ctx, a)
        for b in range(p):
            assert abs(row[b] - kloosterman_literal(p, a, b)) < 1e-10


def test_kloosterman_real_and_weil():
    for p in (101, 499):
        ctx = build_context(p)
        row = np.asarray(kloosterman_row(ctx, 1))[1:]
        assert np.abs(row.imag).max() < 1e-9
        assert np.abs(row).max() <= 2 * math.sqrt(p) + 1e-6


def test_incomplete_kloosterman():
    ctx = build_context(101)
    for k in (1, 5, 100):
        assert abs(incomplete_kloosterman(ctx, k, 1) - e(k / 101)) < 1e-14
        assert abs(incomplete_kloosterman(ctx, k, 100) + 1) < 1e-12
        prof = incomplete_kloosterman_profile(ctx, k)
        assert abs(prof[36] - incomplete_kloosterman(ctx, k, 37)) < 1e-12
    prof = np.abs(incomplete_kloosterman_profile(ctx, 1))
    assert prof.max() <= 1.0 * math.sqrt(101) * math.log(101)
    with pytest.raises(ValueError):
        incomplete_kloosterman(ctx, 1, 0)
    with pytest.raises(ValueError):
        incomplete_kloosterman(ctx, 0, 3)


def test_weighted_inverse_exp_sum():
    ctx = build_context(3)
    w = weighted_inverse_exp_sum(ctx, 1)
    assert abs(w - (1 * e(1 / 3) + 2 * e(2 / 3))) < 1e-14
    assert abs(w - complex(-1.5, -math.sqrt(3) / 2)) < 1e-14
    for p in (13, 211):
        c = build_context(p)
        tab = weighted_inverse_table(c)
        for k in (1, 4, p - 1):
            v = weighted_inverse_exp_sum(c, k)
            assert abs(v - weighted_inverse_exp_sum(c, p - k).conjugate()) < 1e-9
            assert abs(tab[k] - v) < 1e-9 * p
    with pytest.raises(ValueError):
        weighted_inverse_exp_sum(ctx, 3)


def test_cosecant_sum():
    assert cosecant_sum(3) == pytest.approx(2 / math.sqrt(3), rel=1e-15)
    direct = sum(1 / abs(1 - e(-k / 5)) for k in range(1, 5))
    assert cosecant_sum(5) == pytest.approx(direct, rel=1e-14)
    assert cosecant_sum(5) == pytest.approx(
        2 * (1 / (2 * math.sin(math.pi / 5)) + 1 / (2 * math.sin(2 * math.pi / 5))), rel=1e-14
    )
    with pytest.raises(ValueError):
        cosecant_sum(2)


@pytest.mark.parametrize("p", [3, 5, 13, 29])
def test_double_exp_against_grid(p):
    ctx = build_context(p)
    for l in range(1, p):
        grid = D_grid(p, l)
        for route in ("brute", "identity"):
            assert abs(double_exp_sum(ctx, l, route) - grid) < 1e-9 * p**4
        assert abs(double_exp_tables(ctx)["identity"][l] - grid) < 1e-9 * p**4


def test_double_exp_examples():
    ctx = build_context(3)
    assert abs(double_exp_sum(ctx, 1, "brute") - (5 * e(1 / 3) + 4 * e(2 / 3))) < 1e-10
    assert abs(double_exp_sum(ctx, 1, "identity") - (5 * e(1 / 3) + 4 * e(2 / 3))) < 1e-10
    ctx = build_context(101)
    assert abs(double_exp_sum(ctx, 7, "brute") - double_exp_sum(ctx, 7, "identity")) < 1e-6
    assert abs(double_exp_sum(ctx, 7) - double_exp_sum(ctx, 94).conjugate()) < 1e-6
    with pytest.raises(ValueError):
        double_exp_sum(ctx, 0)
    with pytest.raises(ValueError):
        double_exp_sum(ctx, 1, "grid")


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_triple_exp_against_grid(p):
    ctx = build_context(p)
    for l in range(1, p):
        grid = T_grid(p, l)
        for route in ("brute", "formula"):
            assert abs(triple_exp_sum(ctx, l, route) - grid) < 1e-9 * p**6
        tabs = triple_exp_tables(ctx)
        assert abs(tabs["brute"][l] - grid) < 1e-9 * p**6
        assert abs(tabs["formula"][l] - grid) < 1e-9 * p**6


def test_triple_exp_conjugation():
    ctx = build_context(101)
    for l in (1, 7, 50):
        t = triple_exp_sum(ctx, l)
        assert abs(t - triple_exp_sum(ctx, 101 - l).conjugate()) < 1e-8 * 101**6 * 1e-3
        assert abs(t - triple_exp_sum(ctx, l, "brute")) < 1e-8 * (101 * 50) ** 3
    with pytest.raises(ValueError):
        triple_exp_sum(ctx, 202)


def test_grid_oracle_sanity():
    # the D grid at p=3 is four terms: (1,1)->1, (1,2),(2,1)->2 each, (2,2)->4
    assert abs(D_grid(3, 1) - (e(1 / 3) + 4 * e(2 / 3) + 4 * e(4 / 3))) < 1e-14
    assert cmath.isclose(T_grid(3, 1), triple_exp_sum(build_context(3), 1, "brute"), abs_tol=1e-9)
