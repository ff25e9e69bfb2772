"""Additive-character sums modulo p: the geometric-series lemmas, Kloosterman
sums, and the weighted double and triple exponential sums D(l) and T(l).

Notation: e(u) = exp(2 pi i u), ``W(k) = sum_a a e(k inv(a) / p)``.
Reciprocals 1/(1 - e(m/p)) are formed as 1/2 + (i/2) cot(pi m / p), which
is exact in the real part and avoids cancellation near m = 0 and m = p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from . import inverse_sums
from .characters import csum
from .modular import PrimeContext, build_context


@dataclass(frozen=True)
class RootOfUnity:
    p: int
    k: int

    @property
    def value(self) -> complex:
        return complex(np.exp(2j * np.pi * (self.k % self.p) / self.p))

    @property
    def is_trivial(self) -> bool:
        return self.k % self.p == 0


def _unit(p: int, k: int, name: str = "k") -> int:
    if k % p == 0:
        raise ValueError(f"{name} must be nonzero modulo {p}, got {k}")
    return k % p


def recip_one_minus_e(m: int, p: int) -> complex:
    """1 / (1 - e(m/p)) for p not dividing m."""
    m = _unit(p, m, "m")
    return complex(0.5, 0.5 / math.tan(math.pi * m / p))


@lru_cache(maxsize=64)
def recip_table(p: int) -> np.ndarray:
    """``r[m] = 1/(1 - e(m/p))`` for m in ``[1, p)``; ``r[0] = 0``."""
    m = np.arange(1, p)
    out = np.zeros(p, dtype=np.complex128)
    out[1:] = 0.5 + 0.5j / np.tan(np.pi * m / p)
    out.setflags(write=False)
    return out


def tolerance(scale: float, rel: float = 1e-8) -> float:
    """Absolute tolerance for an identity whose summands have total size ``scale``."""
    return rel * max(1.0, scale)


# ---- lemmas ------------------------------------------------------------


def lemma1_check(p: int, k: int) -> tuple[complex, complex]:
    """(sum_b b z^b, -p/(1 - z)) for z = e(k/p)."""
    ctx = build_context(p)
    k = _unit(p, k)
    b = np.arange(1, p)
    z = ctx.roots
    lhs = csum(b * z[(k * b) % p])
    rhs = -p / (1 - z[k])
    return lhs, rhs


def lemma2_sum(p: int, k: int) -> complex:
    """sum_{b=1}^{p-1} 1/(1 - z^b) for z = e(k/p); equals (p-1)/2."""
    ctx = build_context(p)
    k = _unit(p, k)
    zb = ctx.roots[(k * np.arange(1, p)) % p]
    return csum(1 / (1 - zb))


def lemma3_sum(p: int, k: int, d: int) -> complex:
    """sum_{b=1}^{p-1} z^{-d b}/(1 - z^b) for z = e(k/p); equals (p-1)/2 - d."""
    if not 1 <= d < p:
        raise ValueError(f"d must lie in [1, {p - 1}], got {d}")
    ctx = build_context(p)
    k = _unit(p, k)
    b = np.arange(1, p)
    zb = ctx.roots[(k * b) % p]
    return csum(ctx.roots[(-d * k * b) % p] / (1 - zb))


def lemma_tables(ctx: PrimeContext) -> dict[str, np.ndarray]:
    """sum_b b e(kb/p) and sum_b 1/(1 - e(kb/p)) for every k at once (index k)."""
    p = ctx.p
    b = np.arange(p, dtype=np.complex128)
    ones = np.ones(p, dtype=np.complex128)
    ones[0] = 0
    naive = np.zeros(p, dtype=np.complex128)
    naive[1:] = 1 / (1 - ctx.roots[1:])
    return {
        "lemma1": _kernels.gather_sum(ctx.roots, b, p),
        "lemma2": _kernels.gather_sum(naive, ones, p),
        "naive_recip": naive,
    }


def lemma3_row(ctx: PrimeContext, d: int) -> np.ndarray:
    """sum_b e(-dkb/p) / (1 - e(kb/p)) for fixed d and every k (index k)."""
    p = ctx.p
    m = np.arange(p)
    y = np.zeros(p, dtype=np.complex128)
    y[1:] = ctx.roots[(-d * m[1:]) % p] / (1 - ctx.roots[1:])
    ones = np.ones(p, dtype=np.complex128)
    ones[0] = 0
    return _kernels.gather_sum(y, ones, p)


# ---- Kloosterman-type sums --------------------------------------------


def kloosterman(ctx: PrimeContext, a: int, b: int) -> complex:
    """S(a, b; p) = sum_{x=1}^{p-1} e((a x + b inv(x)) / p)."""
    p = ctx.p
    x = np.arange(1, p)
    return csum(ctx.roots[(a * x + b * ctx.inv_table[1:]) % p])


def kloosterman_row(ctx: PrimeContext, a: int) -> np.ndarray:
    """S(a, b; p) for every b in ``[0, p)``."""
    return _kernels.kloosterman_row(ctx.inv_table, ctx.roots, ctx.p, a % ctx.p)


def incomplete_kloosterman(ctx: PrimeContext, k: int, u: int) -> complex:
    """F(u) = sum_{a=1}^{u} e(k inv(a) / p)."""
    p = ctx.p
    k = _unit(p, k)
    if not 1 <= u <= p - 1:
        raise ValueError(f"u must lie in [1, {p - 1}], got {u}")
    return csum(ctx.roots[(k * ctx.inv_table[1 : u + 1]) % p])


def incomplete_kloosterman_profile(ctx: PrimeContext, k: int) -> np.ndarray:
    """F(u) for u = 1..p-1 (index u - 1)."""
    k = _unit(ctx.p, k)
    return np.cumsum(ctx.roots[(k * ctx.inv_table[1:]) % ctx.p])


def weighted_inverse_exp_sum(ctx: PrimeContext, k: int) -> complex:
    """W(k) = sum_{a=1}^{p-1} a e(k inv(a) / p), by direct summation."""
    p = ctx.p
    k = _unit(p, k)
    a = np.arange(1, p)
    return csum(a * ctx.roots[(k * ctx.inv_table[1:]) % p])


@lru_cache(maxsize=16)
def weighted_inverse_table(ctx: PrimeContext) -> np.ndarray:
    """W(k) for every k in ``[0, p)``, as sum_b inv(b) e(k b / p)."""
    out = _kernels.gather_sum(ctx.roots, ctx.inv_table.astype(np.complex128), ctx.p)
    out.setflags(write=False)
    return out


def cosecant_sum(p: int) -> float:
    """sum_{k=1}^{p-1} 1/|1 - e(-k/p)| = sum_k 1/(2 sin(pi k / p))."""
    if p < 3:
        raise ValueError(f"p must be >= 3, got {p}")
    k = np.arange(1, p)
    return math.fsum(1 / (2 * np.sin(np.pi * k / p)))


@lru_cache(maxsize=16)
def exptemp_table(ctx: PrimeContext) -> np.ndarray:
    """E(d) = sum_{k=1}^{p-1} W(k d) / (1 - e(-k/p)) for every d (index d).

    W is tabulated once and reused through the index shift k -> k d.
    """
    p = ctx.p
    r = recip_table(p)
    weights = np.zeros(p, dtype=np.complex128)
    weights[1:] = r[p - np.arange(1, p)]
    out = _kernels.gather_sum(np.asarray(weighted_inverse_table(ctx)), weights, p)
    out.setflags(write=False)
    return out


# ---- weighted double and triple sums ----------------------------------


@lru_cache(maxsize=16)
def double_exp_tables(ctx: PrimeContext) -> dict[str, np.ndarray]:
    """D(l) for every l by both routes (index l).

    ``brute``: sum_d e(l d / p) S(d) over the exact S table;
    ``identity``: -p sum_a a / (1 - e(a l / p)).
    """
    p = ctx.p
    s = inverse_sums.s_table(ctx).astype(np.complex128)
    brute = _kernels.gather_sum(ctx.roots, s, p)
    identity = -p * _kernels.gather_sum(recip_table(p), np.arange(p, dtype=np.complex128), p)
    identity[0] = brute[0]
    return {"brute": brute, "identity": identity}


def double_exp_sum(ctx: PrimeContext, l: int, route: str = "identity") -> complex:
    p = ctx.p
    l = _unit(p, l, "l")
    if route == "brute":
        s = inverse_sums.s_table(ctx)
        return csum(s[1:] * ctx.roots[(l * np.arange(1, p)) % p])
    if route == "identity":
        a = np.arange(1, p)
        return -p * csum(a * recip_table(p)[(a * l) % p])
    raise ValueError(f"unknown route {route!r}")


@lru_cache(maxsize=16)
def triple_exp_tables(ctx: PrimeContext) -> dict[str, np.ndarray]:
    """T(l) for every l by both routes (index l; entry 0 is unused).

    ``brute``: sum_c c D(c l) with D from the exact S table;
    ``formula``: -p^2 (p-1)^3 / 8 + p sum_d E(d) / (1 - e(d l / p)).
    """
    p = ctx.p
    c = np.arange(p, dtype=np.complex128)
    brute = _kernels.gather_sum(double_exp_tables(ctx)["brute"], c, p)
    e = np.array(exptemp_table(ctx))
    e[0] = 0
    formula = -(p**2) * (p - 1) ** 3 / 8 + p * _kernels.gather_sum(recip_table(p), e, p)
    brute[0] = formula[0] = 0
    return {"brute": brute, "formula": formula}


def triple_exp_sum(ctx: PrimeContext, l: int, route: str = "formula") -> complex:
    p = ctx.p
    l = _unit(p, l, "l")
    if route == "brute":
        d_tab = double_exp_tables(ctx)["brute"]
        c = np.arange(1, p)
        return csum(c * d_tab[(c * l) % p])
    if route == "formula":
        e = exptemp_table(ctx)
        d = np.arange(1, p)
        return -(p**2) * (p - 1) ** 3 / 8 + p * csum(e[1:] * recip_table(p)[(d * l) % p])
    raise ValueError(f"unknown route {route!r}")
