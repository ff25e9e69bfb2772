"""Desk-scale measurements of the asymptotic statements about S(d), S_k(d)
and T(l): one ErrorRecord per (prime, statistic), plus log-log exponent fits.

All normalizers use the natural logarithm.
"""

from __future__ import annotations

import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from . import characters, expsums, inverse_sums
from .inverse_sums import DEFAULT_BUDGET, CostCapExceeded
from .modular import PrimeContext, build_context, primes_in_range

MEAN_SQUARE_MAX_P = 250_000

STATISTICS = (
    "thm1_max_err",
    "thm2_M",
    "thm4_max_err",
    "thm5_max_err",
    "thm6_max_dev",
    "cor1_max",
    "lemma4_max",
    "lemma5_ratio",
)

_THM4 = re.compile(r"^thm4_max_err\((\d+)\)$")


def _num(x: Fraction | int | float) -> int | float:
    """int when integral, float otherwise."""
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    return x


@dataclass
class ErrorRecord:
    p: int
    statistic: str
    observed: int | float
    main_term: int | float
    normalizer: float
    ratio: float
    exact: bool = False
    runtime_ms: float | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.normalizer > 0:
            raise ValueError(f"normalizer must be positive, got {self.normalizer}")
        if self.ratio < 0:
            raise ValueError(f"ratio must be nonnegative, got {self.ratio}")


@dataclass(frozen=True)
class FitResult:
    exponent: float
    log_constant: float
    residual: float
    n_used: int
    n_excluded: int


@dataclass
class SweepReport:
    records: list[ErrorRecord]
    fit: FitResult | None = None
    refusals: list[dict[str, Any]] = field(default_factory=list)
    config_echo: dict[str, Any] = field(default_factory=dict)

    @property
    def fitted_exponent(self) -> float | None:
        return None if self.fit is None else self.fit.exponent

    @property
    def fitted_log_constant(self) -> float | None:
        return None if self.fit is None else self.fit.log_constant

    @property
    def residual(self) -> float | None:
        return None if self.fit is None else self.fit.residual


def _deviation_record(p, statistic, observed, normalizer, exact, **extras) -> ErrorRecord:
    observed = _num(observed)
    return ErrorRecord(
        p=p,
        statistic=statistic,
        observed=observed,
        main_term=0,
        normalizer=normalizer,
        ratio=float(observed) / normalizer,
        exact=exact,
        extras=extras,
    )


# ---- statistics --------------------------------------------------------


def theorem1_stats(ctx: PrimeContext) -> ErrorRecord:
    """max_d |S(d) - p^2(p-1)/4| against p^{5/2} log^2 p.

    The deviation from p^3/4 is reported alongside in ``extras``.
    """
    p = ctx.p
    s = inverse_sums.s_table(ctx)[1:]
    if 8 * p**3 >= 2**63:
        s = s.astype(object)
    scaled = 4 * s - p * p * (p - 1)
    observed = Fraction(int(np.abs(scaled).max()), 4)
    alt = Fraction(int(np.abs(8 * s - 2 * p**3).max()), 8)
    normalizer = p**2.5 * math.log(p) ** 2
    return _deviation_record(
        p,
        "thm1_max_err",
        observed,
        normalizer,
        True,
        center=_num(inverse_sums.s_mean(p)),
        observed_p3_centering=_num(alt),
        ratio_p3_centering=float(alt) / normalizer,
    )


def mean_square_exact(ctx: PrimeContext) -> Fraction:
    """M = sum_d (S(d) - p^2(p-1)/4)^2, exactly, via the integers 4 S(d) - p^2(p-1)."""
    p = ctx.p
    if p >= MEAN_SQUARE_MAX_P:
        raise OverflowError(f"mean-square statistic is limited to p < {MEAN_SQUARE_MAX_P}")
    scaled = 4 * inverse_sums.s_table(ctx)[1:] - p * p * (p - 1)
    return Fraction(sum(int(v) * int(v) for v in scaled), 16)


def mean_square_main_term(p: int) -> float:
    """(5/144) p^2 (p^2-1)^3 / (p^2+1)."""
    return float(Fraction(5 * p * p * (p * p - 1) ** 3, 144 * (p * p + 1)))


def mean_square_fourth_moment(ctx: PrimeContext) -> float:
    """p^6 / (pi^4 (p-1)) * sum_{chi odd} |L(1, chi)|^4."""
    p = ctx.p
    l1 = characters.l_one_values(ctx)[1::2]
    return p**6 / (math.pi**4 * (p - 1)) * math.fsum(np.abs(l1) ** 4)


def theorem2_mean_square(ctx: PrimeContext) -> ErrorRecord:
    p = ctx.p
    m = mean_square_exact(ctx)
    main = mean_square_main_term(p)
    normalizer = p**5 * math.exp(3 * math.log(p) / math.log(math.log(p)))
    fourth = mean_square_fourth_moment(ctx)
    return ErrorRecord(
        p=p,
        statistic="thm2_M",
        observed=_num(m),
        main_term=main,
        normalizer=normalizer,
        ratio=abs(float(m) - main) / normalizer,
        exact=True,
        extras={
            "observed_exact": str(m),
            "relative_deviation": abs(float(m) - main) / main,
            "fourth_moment_M": fourth,
            "fourth_moment_rel_dev": abs(fourth - float(m)) / float(m) if m else 0.0,
        },
    )


def corollary1_values(ctx: PrimeContext) -> np.ndarray:
    """sum_{chi != chi_0} conj(chi)(d) L(0, chi)^2 for every d (index d)."""
    coeffs = characters.l_zero_values(ctx) ** 2
    return characters.character_transform(ctx, coeffs)


def corollary1_stat(ctx: PrimeContext, d: int) -> ErrorRecord:
    p = ctx.p
    if d % p == 0:
        raise ValueError(f"d must be a unit modulo {p}, got {d}")
    d %= p
    observed = float(abs(corollary1_values(ctx)[d]))
    via_s = (p - 1) / p**2 * abs(float(int(inverse_sums.s_table(ctx)[d]) - inverse_sums.s_mean(p)))
    return _deviation_record(
        p,
        "cor1",
        observed,
        p**1.5 * math.log(p) ** 2,
        False,
        d=d,
        via_charresult=via_s,
        cross_check_dev=abs(observed - via_s),
    )


def corollary1_max(ctx: PrimeContext) -> ErrorRecord:
    p = ctx.p
    vals = np.abs(corollary1_values(ctx)[1:])
    s = inverse_sums.s_table(ctx)[1:].astype(float)
    via_s = (p - 1) / p**2 * np.abs(s - p * p * (p - 1) / 4)
    worst = int(np.argmax(vals))
    return _deviation_record(
        p,
        "cor1_max",
        float(vals[worst]),
        p**1.5 * math.log(p) ** 2,
        False,
        argmax_d=worst + 1,
        cross_check_dev=float(np.abs(vals - via_s).max()),
    )


def theorem4_stats(ctx: PrimeContext, k: int) -> ErrorRecord:
    """max_d |S_k(d) - p^k (p-1)^{k-1} / 2^k| against p^{3k/2} log^k p."""
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    p = ctx.p
    main = inverse_sums.s_k_main_term(p, k)
    values = inverse_sums.s_k_values(ctx, k)
    observed = max(abs(v - main) for v in values)
    return _deviation_record(
        p, f"thm4_max_err({k})", observed, p ** (1.5 * k) * math.log(p) ** k, True, center=_num(main)
    )


def theorem5_stats(ctx: PrimeContext) -> ErrorRecord:
    """max_d |S_3(d) - p(p-1)^4/8| against p^{9/2} log^2 p."""
    p = ctx.p
    center = Fraction(p * (p - 1) ** 4, 8)
    values = inverse_sums.s_k_values(ctx, 3)
    observed = max(abs(v - center) for v in values)
    alt = max(abs(v - Fraction(p**5, 8)) for v in values)
    return _deviation_record(
        p,
        "thm5_max_err",
        observed,
        p**4.5 * math.log(p) ** 2,
        True,
        center=_num(center),
        observed_p5_centering=_num(alt),
    )


def _l_sample(p: int, samples: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng([seed, p])
    half = np.arange(1, (p - 1) // 2 + 1)
    n = min(samples, half.size)
    return np.sort(rng.choice(half, size=n, replace=False))


def theorem6_stats(
    ctx: PrimeContext, full_l_max_p: int = 300, samples: int = 64, seed: int = 0
) -> ErrorRecord:
    """max_l |T(l) + p^5/8| against p^{9/2} log^3 p.

    By T(p - l) = conj T(l) only l <= (p-1)/2 is needed. Above
    ``full_l_max_p`` a seeded sample of l is used instead of every l.
    """
    p = ctx.p
    target = -(p**5) / 8
    extras: dict[str, Any] = {}
    if p <= full_l_max_p:
        tables = expsums.triple_exp_tables(ctx)
        half = slice(1, (p - 1) // 2 + 1)
        t = tables["formula"][half]
        extras["l_mode"] = "full"
        extras["n_l"] = (p - 1) // 2
        extras["route_dev"] = float(np.abs(tables["brute"][half] - t).max())
    else:
        ls = _l_sample(p, samples, seed)
        t = np.array([expsums.triple_exp_sum(ctx, int(l), "formula") for l in ls])
        extras["l_mode"] = "sampled"
        extras["n_l"] = int(ls.size)
    observed = float(np.abs(t - target).max())
    return _deviation_record(p, "thm6_max_dev", observed, p**4.5 * math.log(p) ** 3, False, **extras)


def lemma4_max(ctx: PrimeContext) -> ErrorRecord:
    p = ctx.p
    w = np.abs(expsums.weighted_inverse_table(ctx)[1:])
    worst = int(np.argmax(w))
    return _deviation_record(
        p, "lemma4_max", float(w[worst]), p**1.5 * math.log(p), False, argmax_k=worst + 1
    )


def lemma5_ratio(ctx: PrimeContext) -> ErrorRecord:
    p = ctx.p
    return _deviation_record(p, "lemma5_ratio", expsums.cosecant_sum(p), p * math.log(p), False)


# ---- sweeps ------------------------------------------------------------


def parse_statistic(name: str, default_k: int = 3) -> tuple[str, int | None]:
    """Split a statistic name into (base, k); ``thm4_max_err(4)`` carries k."""
    m = _THM4.match(name)
    if m:
        return "thm4_max_err", int(m.group(1))
    if name not in STATISTICS:
        raise ValueError(f"unknown statistic {name!r}; choose from {', '.join(STATISTICS)}")
    return name, default_k if name == "thm4_max_err" else None


def statistic_cost(name: str, p: int, full_l_max_p: int = 300, samples: int = 64) -> int:
    """Rough inner-iteration count used against the budget."""
    if name == "lemma5_ratio":
        return p
    if name == "thm6_max_dev" and p > full_l_max_p:
        return 4 * p * p + samples * p
    if name in ("thm4_max_err", "thm5_max_err", "cor1_max", "thm6_max_dev"):
        return 4 * p * p
    return p * p


def compute_statistic(
    ctx: PrimeContext, name: str, k: int | None = None, full_l_max_p: int = 300,
    samples: int = 64, seed: int = 0,
) -> ErrorRecord:
    if name == "thm1_max_err":
        return theorem1_stats(ctx)
    if name == "thm2_M":
        return theorem2_mean_square(ctx)
    if name == "thm4_max_err":
        return theorem4_stats(ctx, k or 3)
    if name == "thm5_max_err":
        return theorem5_stats(ctx)
    if name == "thm6_max_dev":
        return theorem6_stats(ctx, full_l_max_p=full_l_max_p, samples=samples, seed=seed)
    if name == "cor1_max":
        return corollary1_max(ctx)
    if name == "lemma4_max":
        return lemma4_max(ctx)
    if name == "lemma5_ratio":
        return lemma5_ratio(ctx)
    raise ValueError(f"unknown statistic {name!r}")


def fit_exponent(records: Iterable[ErrorRecord]) -> FitResult:
    """Least-squares slope of log(observed) against log(p)."""
    records = list(records)
    usable = [r for r in records if float(r.observed) > 0]
    if len(usable) < 3:
        raise ValueError(f"exponent fit needs >= 3 records with observed > 0, got {len(usable)}")
    x = np.log([float(r.p) for r in usable])
    y = np.log([float(r.observed) for r in usable])
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - (slope * x + intercept)
    return FitResult(
        exponent=float(slope),
        log_constant=float(intercept),
        residual=float(np.sqrt(np.mean(resid**2))),
        n_used=len(usable),
        n_excluded=len(records) - len(usable),
    )


def _run_prime(p, stats, budget, full_l_max_p, samples, seed, timing):
    ctx = build_context(p)
    records, refusals = [], []
    for base, k in stats:
        label = base if k is None else f"thm4_max_err({k})"
        cost = statistic_cost(base, p, full_l_max_p, samples)
        if cost > budget:
            refusals.append({"p": p, "statistic": label, "reason": str(CostCapExceeded(label, cost, budget))})
            continue
        t0 = time.perf_counter()
        try:
            rec = compute_statistic(ctx, base, k, full_l_max_p, samples, seed)
        except (CostCapExceeded, OverflowError) as exc:
            refusals.append({"p": p, "statistic": label, "reason": str(exc)})
            continue
        if timing:
            rec.runtime_ms = (time.perf_counter() - t0) * 1e3
        records.append(rec)
    return records, refusals


def run_sweep(
    prime_range: tuple[int, int],
    statistics: Sequence[str],
    budget: int = DEFAULT_BUDGET,
    threads: int | None = 1,
    k: int = 3,
    seed: int = 0,
    full_l_max_p: int = 300,
    samples: int = 64,
    fit: bool = False,
    timing: bool = False,
) -> SweepReport:
    """One record per (prime, statistic), sorted by p then statistic name.

    ``threads=None`` uses the available parallelism. Statistics refused by
    the budget appear in ``refusals`` instead of ``records``.
    """
    if not statistics:
        raise ValueError("at least one statistic is required")
    lo, hi = prime_range
    primes = [q for q in primes_in_range(max(lo, 2), hi) if q > 2]
    if not primes:
        raise ValueError(f"no odd primes in [{lo}, {hi}]")
    stats = [parse_statistic(s, k) for s in statistics]
    stats = list(dict.fromkeys(stats))

    def job(p):
        return _run_prime(p, stats, budget, full_l_max_p, samples, seed, timing)

    if threads == 1:
        results = [job(p) for p in primes]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, primes))
    records = sorted((r for recs, _ in results for r in recs), key=lambda r: (r.p, r.statistic))
    refusals = sorted((r for _, refs in results for r in refs), key=lambda r: (r["p"], r["statistic"]))
    report = SweepReport(records=records, refusals=refusals)
    if fit:
        names = {r.statistic for r in records}
        if len(names) == 1 and sum(float(r.observed) > 0 for r in records) >= 3:
            report.fit = fit_exponent(records)
    return report
