"""Dirichlet characters modulo p, Gauss sums, and the special values
L(0, chi) and L(1, chi).

A character is indexed by an exponent ``j`` against the least primitive root
``g``: chi_j(g^t) = omega^{j t} with omega = e(1/(p-1)). Odd characters are
exactly those with odd ``j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from . import _kernels
from .modular import PrimeContext

Parity = Literal["all", "odd", "even"]


def csum(values) -> complex:
    """Correctly rounded sum of a complex sequence (fsum per component)."""
    arr = np.asarray(values, dtype=np.complex128)
    return complex(math.fsum(arr.real), math.fsum(arr.imag))


@lru_cache(maxsize=64)
def unit_roots(n: int) -> np.ndarray:
    """``e(m/n)`` for m in ``[0, n)``."""
    out = np.exp(2j * np.pi * np.arange(n) / n)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class DirichletCharacter:
    ctx: PrimeContext
    j: int

    def __post_init__(self):
        if not 0 <= self.j < self.ctx.p - 1:
            raise ValueError(f"character index must lie in [0, {self.ctx.p - 2}], got {self.j}")

    @property
    def is_principal(self) -> bool:
        return self.j == 0

    @property
    def is_odd(self) -> bool:
        return self.j % 2 == 1

    def values(self) -> np.ndarray:
        """Length-p array with ``chi(a)`` at index ``a`` (0 at index 0)."""
        p = self.ctx.p
        out = np.zeros(p, dtype=np.complex128)
        omega = unit_roots(p - 1)
        out[1:] = omega[(self.j * self.ctx.dlog_table[1:]) % (p - 1)]
        return out

    def __call__(self, a: int) -> complex:
        return chi_eval(self, a)


def chi_eval(chi: DirichletCharacter, a: int) -> complex:
    p = chi.ctx.p
    r = a % p
    if r == 0:
        return 0j
    if chi.j == 0:
        return 1 + 0j
    t = (chi.j * int(chi.ctx.dlog_table[r])) % (p - 1)
    return complex(unit_roots(p - 1)[t])


def enumerate_characters(ctx: PrimeContext, parity_filter: Parity = "all") -> list[DirichletCharacter]:
    if parity_filter == "all":
        js = range(ctx.p - 1)
    elif parity_filter == "odd":
        js = range(1, ctx.p - 1, 2)
    elif parity_filter == "even":
        js = range(0, ctx.p - 1, 2)
    else:
        raise ValueError(f"parity_filter must be 'all', 'odd' or 'even', got {parity_filter!r}")
    return [DirichletCharacter(ctx, j) for j in js]


def _require_nonprincipal(chi: DirichletCharacter, what: str) -> None:
    if chi.is_principal:
        raise ValueError(f"{what} is undefined here for the principal character")


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_a chi(a) e(a/p)."""
    _require_nonprincipal(chi, "gauss_sum")
    return csum(chi.values() * chi.ctx.roots)


def weighted_char_sum(chi: DirichletCharacter) -> complex:
    """sum_{a=1}^{p-1} a chi(a), by direct summation."""
    return csum(np.arange(chi.ctx.p) * chi.values())


def l_zero(chi: DirichletCharacter) -> complex:
    """L(0, chi) = -(1/p) sum_a a chi(a)."""
    _require_nonprincipal(chi, "l_zero")
    return -weighted_char_sum(chi) / chi.ctx.p


def truncation_length(p: int) -> int:
    """Series length for the truncated L(1, chi).

    At least max(10^6, p^2, 2*10^6*sqrt(p)), rounded up to whole periods so
    the partial character sum vanishes there. The tail is then close to
    |L(0, chi)| / N <= sqrt(p) |L(1, chi)| / (pi N), below 10^-6 whenever
    |L(1, chi)| < 2 pi.
    """
    n = max(10**6, p * p, math.ceil(2e6 * math.sqrt(p)))
    return -(-n // p) * p


def l_one(chi: DirichletCharacter, method: Literal["finite", "truncated"] = "finite") -> complex:
    """L(1, chi) for an odd character.

    ``finite`` uses L(1, chi) = (i pi tau(chi) / p) B_{1, conj chi} with
    B_{1, conj chi} = (1/p) sum_a a conj(chi)(a). ``truncated`` sums the
    Dirichlet series directly.
    """
    if chi.is_principal or not chi.is_odd:
        raise ValueError("l_one is only provided for odd characters")
    p = chi.ctx.p
    if method == "finite":
        bernoulli = weighted_char_sum(chi).conjugate() / p
        return 1j * math.pi * gauss_sum(chi) / p * bernoulli
    if method == "truncated":
        vals = chi.values()
        n_total = truncation_length(p)
        block = p * max(1, (1 << 20) // p)
        partial_re, partial_im = [], []
        for start in range(1, n_total + 1, block):
            n = np.arange(start, min(n_total, start + block - 1) + 1, dtype=np.int64)
            terms = vals[n % p] / n
            partial_re.append(terms.real.sum())
            partial_im.append(terms.imag.sum())
        return complex(math.fsum(partial_re), math.fsum(partial_im))
    raise ValueError(f"unknown method {method!r}")


# ---- all-characters-at-once tables --------------------------------------


@lru_cache(maxsize=16)
def weighted_char_sums(ctx: PrimeContext) -> np.ndarray:
    """``A[j] = sum_a a chi_j(a)`` for every j in ``[0, p-2]``.

    Written over t = dlog(a): A[j] = sum_t g^t omega^{j t}.
    """
    n = ctx.p - 1
    out = _kernels.gather_sum(unit_roots(n), ctx.pow_table.astype(np.complex128), n)
    out.setflags(write=False)
    return out


def character_transform(ctx: PrimeContext, coeffs: np.ndarray) -> np.ndarray:
    """``out[d] = sum_j coeffs[j] conj(chi_j)(d)`` for d in ``[0, p)``
    (``out[0] = 0``)."""
    n = ctx.p - 1
    by_log = _kernels.gather_sum(np.conj(unit_roots(n)), np.asarray(coeffs, dtype=np.complex128), n)
    out = np.zeros(ctx.p, dtype=np.complex128)
    out[1:] = by_log[ctx.dlog_table[1:]]
    return out


def l_zero_values(ctx: PrimeContext) -> np.ndarray:
    """L(0, chi_j) for all j; index 0 (principal) is set to 0."""
    out = -np.asarray(weighted_char_sums(ctx)) / ctx.p
    out[0] = 0
    return out


def gauss_sums(ctx: PrimeContext) -> np.ndarray:
    """tau(chi_j) for all j, via sum_t omega^{j t} e(g^t / p)."""
    n = ctx.p - 1
    return _kernels.gather_sum(unit_roots(n), ctx.roots[ctx.pow_table], n)


def l_one_values(ctx: PrimeContext) -> np.ndarray:
    """L(1, chi_j) by the finite formula for odd j; even entries are NaN."""
    a = np.asarray(weighted_char_sums(ctx))
    out = 1j * math.pi * gauss_sums(ctx) / ctx.p * np.conj(a) / ctx.p
    out[0::2] = np.nan
    return out
