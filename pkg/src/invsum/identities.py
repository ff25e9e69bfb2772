"""Identity suites run by ``invsum verify-identities``.

Each suite evaluates one exact identity for every admissible parameter at a
prime and reports the worst deviation against a condition-aware tolerance
``rel * scale``, where ``scale`` is the total absolute size of the summands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import _kernels, characters, expsums, inverse_sums
from .inverse_sums import ROUNDING_SLACK
from .modular import PrimeContext, build_context, primes_in_range

DEFAULT_REL_TOL = 1e-8
WEIL_SLACK = 1e-6
KLOOSTERMAN_IMAG_TOL = 1e-9


@dataclass
class IdentityResult:
    identity: str
    p: int
    max_dev: float
    tol: float
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return bool(self.max_dev <= self.tol)


def _worst(name, p, dev, tol, param_name, offset=1, **extra):
    dev = np.asarray(dev, dtype=float)
    tol = np.broadcast_to(np.asarray(tol, dtype=float), dev.shape)
    i = int(np.argmax(dev - tol))
    params = {param_name: i + offset, **extra}
    return IdentityResult(name, p, float(dev[i]), float(tol[i]), params)


def check_lemma1(ctx: PrimeContext, rel: float) -> IdentityResult:
    p = ctx.p
    lhs = expsums.lemma_tables(ctx)["lemma1"][1:]
    rhs = -p / (1 - ctx.roots[1:])
    return _worst("lemma1", p, np.abs(lhs - rhs), expsums.tolerance(p * (p - 1) / 2, rel), "k")


def check_lemma2(ctx: PrimeContext, rel: float) -> IdentityResult:
    p = ctx.p
    lhs = expsums.lemma_tables(ctx)["lemma2"][1:]
    scale = expsums.cosecant_sum(p)
    return _worst("lemma2", p, np.abs(lhs - (p - 1) / 2), expsums.tolerance(scale, rel), "k")


def check_lemma3(ctx: PrimeContext, rel: float) -> IdentityResult:
    p = ctx.p
    tol = expsums.tolerance(expsums.cosecant_sum(p), rel)
    worst = None
    for d in range(1, p):
        row = expsums.lemma3_row(ctx, d)[1:]
        res = _worst("lemma3", p, np.abs(row - ((p - 1) / 2 - d)), tol, "k", d=d)
        if worst is None or res.max_dev - res.tol > worst.max_dev - worst.tol:
            worst = res
    return worst


def check_double(ctx: PrimeContext, rel: float) -> IdentityResult:
    p = ctx.p
    tabs = expsums.double_exp_tables(ctx)
    dev = np.abs(tabs["brute"][1:] - tabs["identity"][1:])
    return _worst("doubleD", p, dev, expsums.tolerance((p * (p - 1) // 2) ** 2, rel), "l")


def check_triple(ctx: PrimeContext, rel: float) -> IdentityResult:
    p = ctx.p
    tabs = expsums.triple_exp_tables(ctx)
    dev = np.abs(tabs["brute"][1:] - tabs["formula"][1:])
    return _worst("tripleT", p, dev, expsums.tolerance((p * (p - 1) // 2) ** 3, rel), "l")


def check_double_orthogonality(ctx: PrimeContext, rel: float) -> IdentityResult:
    """sum_{l=1}^{p-1} e(-d l/p) D(l) = p S(d) - (p(p-1)/2)^2."""
    p = ctx.p
    d_tab = np.array(expsums.double_exp_tables(ctx)["identity"])
    d_tab[0] = 0
    lhs = _kernels.gather_sum(ctx.roots.conj(), d_tab, p)[1:]
    rhs = p * inverse_sums.s_table(ctx)[1:].astype(float) - (p * (p - 1) // 2) ** 2
    scale = float(np.abs(d_tab).sum())
    return _worst("doubleD_orthogonality", p, np.abs(lhs - rhs), expsums.tolerance(scale, rel), "d")


def _rounding_check(name, ctx, table, scale, rel):
    p = ctx.p
    exact = inverse_sums.s_table(ctx)[1:].astype(float)
    z = np.asarray(table)[1:]
    dev = np.abs(z - exact)
    tol = min(ROUNDING_SLACK, expsums.tolerance(scale, rel))
    return _worst(name, p, dev, tol, "d")


def check_charresult(ctx: PrimeContext, rel: float) -> IdentityResult:
    p = ctx.p
    a = np.abs(characters.weighted_char_sums(ctx)[1:])
    scale = p * p * (p - 1) / 4 + float((a**2).sum()) / (p - 1)
    return _rounding_check("charresult", ctx, inverse_sums.s_table_char(ctx), scale, rel)


def check_exptemp(ctx: PrimeContext, rel: float) -> IdentityResult:
    p = ctx.p
    w = np.abs(expsums.weighted_inverse_table(ctx)[1:])
    scale = p * (p - 1) ** 2 / 4 + expsums.cosecant_sum(p) * float(w.max())
    return _rounding_check("exptemp", ctx, inverse_sums.s_table_exp(ctx), scale, rel)


def check_gauss(ctx: PrimeContext, rel: float) -> IdentityResult:
    p = ctx.p
    tau = np.abs(characters.gauss_sums(ctx)[1:])
    dev = np.abs(tau - math.sqrt(p)) / math.sqrt(p)
    return _worst("gauss_magnitude", p, dev, rel, "j")


def check_l_relation(ctx: PrimeContext, rel: float) -> IdentityResult:
    """|L(0, chi)| = (sqrt(p)/pi) |L(1, chi)| for odd chi, relative."""
    p = ctx.p
    l0 = np.abs(characters.l_zero_values(ctx)[1::2])
    l1 = np.abs(characters.l_one_values(ctx)[1::2])
    rhs = math.sqrt(p) / math.pi * l1
    dev = np.abs(l0 - rhs) / np.maximum(l0, 1e-300)
    res = _worst("l_value_magnitude", p, dev, rel, "j")
    res.params["j"] = 2 * res.params["j"] - 1
    return res


def check_weil(ctx: PrimeContext, rel: float) -> IdentityResult:
    """|S(a, b; p)| <= 2 sqrt(p) for p not dividing ab, using S(a, b) = S(1, ab)."""
    p = ctx.p
    row = np.asarray(expsums.kloosterman_row(ctx, 1))[1:]
    bound = 2 * math.sqrt(p) + WEIL_SLACK
    res = _worst("weil_bound", p, np.abs(row), bound, "ab")
    imag = float(np.abs(row.imag).max())
    if imag > KLOOSTERMAN_IMAG_TOL:
        return IdentityResult("weil_bound", p, imag, KLOOSTERMAN_IMAG_TOL, {"imag": True})
    return res


SUITES: dict[str, Callable[[PrimeContext, float], IdentityResult]] = {
    "lemma1": check_lemma1,
    "lemma2": check_lemma2,
    "lemma3": check_lemma3,
    "doubleD": check_double,
    "doubleD_orthogonality": check_double_orthogonality,
    "tripleT": check_triple,
    "charresult": check_charresult,
    "exptemp": check_exptemp,
    "gauss_magnitude": check_gauss,
    "l_value_magnitude": check_l_relation,
    "weil_bound": check_weil,
}


def verify_prime(p: int, rel: float = DEFAULT_REL_TOL, suites=None) -> list[IdentityResult]:
    ctx = build_context(p)
    names = list(SUITES) if suites is None else list(suites)
    return [SUITES[name](ctx, rel) for name in names]


def verify_range(lo: int, hi: int, rel: float = DEFAULT_REL_TOL, suites=None) -> list[IdentityResult]:
    """Results for every odd prime in ``[lo, hi]``, ordered by p then suite."""
    out = []
    for p in primes_in_range(max(lo, 3), hi):
        out.extend(verify_prime(p, rel, suites))
    return out


def summarize(results: list[IdentityResult]) -> list[dict[str, Any]]:
    """Per-identity worst case (largest dev/tol) across primes."""
    def badness(r: IdentityResult) -> float:
        if r.tol > 0:
            return r.max_dev / r.tol
        return math.inf if r.max_dev > 0 else 0.0

    by_name: dict[str, IdentityResult] = {}
    failures: dict[str, int] = {}
    for r in results:
        failures[r.identity] = failures.get(r.identity, 0) + (not r.ok)
        cur = by_name.get(r.identity)
        if cur is None or badness(r) > badness(cur):
            by_name[r.identity] = r
    return [
        {
            "identity": name,
            "max_dev": r.max_dev,
            "tol": r.tol,
            "worst_p": r.p,
            "worst_params": r.params,
            "breaches": failures[name],
            "ok": failures[name] == 0,
        }
        for name, r in by_name.items()
    ]
