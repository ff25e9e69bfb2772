import math
from fractions import Fraction

import numpy as np
import pytest

from invsum import build_context
from invsum.harness import (
    STATISTICS,
    ErrorRecord,
    compute_statistic,
    corollary1_max,
    corollary1_stat,
    corollary1_values,
    fit_exponent,
    lemma4_max,
    lemma5_ratio,
    mean_square_exact,
    mean_square_fourth_moment,
    mean_square_main_term,
    parse_statistic,
    run_sweep,
    theorem1_stats,
    theorem2_mean_square,
    theorem4_stats,
    theorem5_stats,
    theorem6_stats,
)
from invsum.modular import primes_in_range

from oracles import S_k_tuples, S_pairs, T_grid


def _synthetic(exponent, c=1.0, primes=(101, 211, 307, 401, 503, 1009)):
    return [
        ErrorRecord(p=p, statistic="x", observed=c * p**exponent, main_term=0, normalizer=1.0, ratio=0.0)
        for p in primes
    ]


def test_theorem1_examples():
    r = theorem1_stats(build_context(5))
    assert r.observed == 4 and r.main_term == 0 and r.exact
    assert r.extras["center"] == 25
    r = theorem1_stats(build_context(3))
    assert r.observed == 0.5
    assert r.ratio == pytest.approx(0.5 / (3**2.5 * math.log(3) ** 2))


def test_theorem1_p3_centering_reported():
    p = 7
    devs = [abs(S_pairs(p, d) - Fraction(p**3, 4)) for d in range(1, p)]
    assert theorem1_stats(build_context(p)).extras["observed_p3_centering"] == float(max(devs))


def test_theorem2_examples():
    assert mean_square_exact(build_context(5)) == 50
    assert mean_square_exact(build_context(3)) == Fraction(1, 2)
    m7 = sum((Fraction(S_pairs(7, d)) - Fraction(49 * 6, 4)) ** 2 for d in range(1, 7))
    assert mean_square_exact(build_context(7)) == m7 == Fraction(1323, 2)
    r = theorem2_mean_square(build_context(5))
    assert r.observed == 50 and r.exact
    assert r.main_term == pytest.approx(5 / 144 * 25 * 24**3 / 26)
    assert r.extras["observed_exact"] == "50"


@pytest.mark.parametrize("p", [3, 5, 7, 101, 307, 499])
def test_fourth_moment_matches(p):
    ctx = build_context(p)
    m = float(mean_square_exact(ctx))
    assert abs(mean_square_fourth_moment(ctx) - m) <= 1e-6 * m


def test_mean_square_main_term():
    assert mean_square_main_term(5) == pytest.approx(5 * 25 * 24**3 / (144 * 26), rel=1e-15)


def test_corollary1_examples():
    ctx = build_context(5)
    r = corollary1_stat(ctx, 1)
    assert r.observed == pytest.approx(0.64, abs=1e-12)
    assert r.extras["via_charresult"] == pytest.approx(0.64, abs=1e-15)
    with pytest.raises(ValueError):
        corollary1_stat(ctx, 5)


@pytest.mark.parametrize("p", [5, 13, 101, 211])
def test_corollary1_even_characters_vanish_and_consistency(p):
    ctx = build_context(p)
    from invsum.characters import l_zero_values

    l0 = l_zero_values(ctx)
    assert np.abs(l0[2::2]).max() < 1e-9
    vals = corollary1_values(ctx)[1:]
    m = mean_square_exact(ctx)
    via = math.fsum((np.abs(vals) * p * p / (p - 1)) ** 2)
    assert via == pytest.approx(float(m), rel=1e-9)
    assert corollary1_max(ctx).extras["cross_check_dev"] < 1e-9 * p**1.5


def test_theorem4_examples():
    r = theorem4_stats(build_context(3), 3)
    assert r.observed == 0.5
    assert r.statistic == "thm4_max_err(3)"
    assert r.extras["center"] == 13.5
    with pytest.raises(ValueError):
        theorem4_stats(build_context(3), 2)


@pytest.mark.parametrize("p", [5, 7])
def test_theorem4_k3_shares_inputs_with_theorem5(p):
    ctx = build_context(p)
    values = [S_k_tuples(p, 3, d) for d in range(1, p)]
    main = Fraction(p**3 * (p - 1) ** 2, 8)
    assert theorem4_stats(ctx, 3).observed == float(max(abs(v - main) for v in values))
    center = Fraction(p * (p - 1) ** 4, 8)
    assert theorem5_stats(ctx).observed == max(abs(v - center) for v in values)


def test_theorem5_p3():
    # S_3(1) = 13, S_3(2) = 14 and the center is 3 * 2^4 / 8 = 6
    r = theorem5_stats(build_context(3))
    assert r.observed == 8
    assert r.extras["center"] == 6


def test_theorem6_p3_and_routes():
    ctx = build_context(3)
    r = theorem6_stats(ctx)
    assert r.observed == pytest.approx(abs(T_grid(3, 1) + 3**5 / 8), rel=1e-12)
    assert r.extras["l_mode"] == "full" and r.extras["n_l"] == 1
    ctx = build_context(61)
    r = theorem6_stats(ctx)
    full = max(abs(complex(theorem_t) + 61**5 / 8) for theorem_t in _all_t(ctx))
    assert r.observed == pytest.approx(full, rel=1e-12)


def _all_t(ctx):
    from invsum.expsums import triple_exp_tables

    return triple_exp_tables(ctx)["formula"][1:]


def test_theorem6_sampling_is_seeded():
    ctx = build_context(331)
    a = theorem6_stats(ctx, full_l_max_p=300, samples=8, seed=3)
    b = theorem6_stats(ctx, full_l_max_p=300, samples=8, seed=3)
    c = theorem6_stats(ctx, full_l_max_p=300, samples=8, seed=4)
    assert a.extras["l_mode"] == "sampled" and a.extras["n_l"] == 8
    assert a.observed == b.observed
    assert c.observed <= theorem6_stats(ctx, full_l_max_p=400).observed
    assert a.observed <= theorem6_stats(ctx, full_l_max_p=400).observed


def test_lemma_ratios():
    r = lemma5_ratio(build_context(3))
    assert r.observed == pytest.approx(2 / math.sqrt(3))
    r = lemma4_max(build_context(101))
    assert 0 < r.ratio < 1


def test_lower_bound_from_mean_square():
    for p in primes_in_range(50, 400):
        ctx = build_context(p)
        m = float(mean_square_exact(ctx))
        mx = float(theorem1_stats(ctx).observed)
        assert mx >= math.sqrt(m / (p - 1))
        assert math.sqrt(m / (p - 1)) / p**2.5 > 0.05


def test_fit_exact_power_laws():
    f = fit_exponent(_synthetic(2.5))
    assert abs(f.exponent - 2.5) < 1e-9
    assert f.residual < 1e-9
    f = fit_exponent(_synthetic(2.0, c=3.7))
    assert abs(f.exponent - 2.0) < 1e-9
    assert abs(f.log_constant - math.log(3.7)) < 1e-9


def test_fit_excludes_zero_and_needs_three():
    recs = _synthetic(1.5)
    recs.append(ErrorRecord(p=7, statistic="x", observed=0, main_term=0, normalizer=1.0, ratio=0.0))
    f = fit_exponent(recs)
    assert f.n_used == 6 and f.n_excluded == 1
    with pytest.raises(ValueError):
        fit_exponent(_synthetic(1.0, primes=(3, 5)))


def test_error_record_invariants():
    with pytest.raises(ValueError):
        ErrorRecord(p=3, statistic="x", observed=1, main_term=0, normalizer=0.0, ratio=0.0)
    with pytest.raises(ValueError):
        ErrorRecord(p=3, statistic="x", observed=1, main_term=0, normalizer=1.0, ratio=-1.0)


def test_parse_statistic():
    assert parse_statistic("thm4_max_err(4)") == ("thm4_max_err", 4)
    assert parse_statistic("thm4_max_err", 5) == ("thm4_max_err", 5)
    assert parse_statistic("thm1_max_err") == ("thm1_max_err", None)
    with pytest.raises(ValueError):
        parse_statistic("thm7")


def test_run_sweep_examples():
    rep = run_sweep((3, 7), ["thm1_max_err"])
    assert [r.p for r in rep.records] == [3, 5, 7]
    assert rep.fit is None
    rep = run_sweep((3, 3), ["thm2_M"])
    assert len(rep.records) == 1 and rep.records[0].observed == 0.5
    rep = run_sweep((3, 50), ["thm1_max_err"], fit=True)
    # 3..47 holds 14 primes
    assert len(rep.records) == 14 and rep.fitted_exponent is not None
    with pytest.raises(ValueError):
        run_sweep((24, 28), ["thm1_max_err"])
    with pytest.raises(ValueError):
        run_sweep((3, 7), [])


def test_run_sweep_refusals():
    rep = run_sweep((3, 40), ["thm1_max_err", "thm5_max_err"], budget=2000)
    got = {(r.p, r.statistic) for r in rep.records}
    refused = {(r["p"], r["statistic"]) for r in rep.refusals}
    assert (37, "thm5_max_err") in refused and (37, "thm5_max_err") not in got
    assert (37, "thm1_max_err") in got
    assert all("cap" in r["reason"] for r in rep.refusals)


def test_run_sweep_deterministic_across_threads():
    stats = ["thm1_max_err", "thm2_M", "thm6_max_dev", "lemma4_max"]
    a = run_sweep((3, 120), stats, threads=1)
    b = run_sweep((3, 120), stats, threads=None)
    c = run_sweep((3, 120), stats, threads=4)
    key = lambda rep: [(r.p, r.statistic, r.observed, r.ratio, r.runtime_ms) for r in rep.records]
    assert key(a) == key(b) == key(c)
    assert [(r.p, r.statistic) for r in a.records] == sorted((r.p, r.statistic) for r in a.records)


def test_compute_statistic_covers_all_names():
    ctx = build_context(11)
    for name in STATISTICS:
        base, k = parse_statistic(name)
        rec = compute_statistic(ctx, base, k)
        assert rec.ratio >= 0 and rec.normalizer > 0
