"""S(d) = sum over a*b = d (mod p) of a*b, and its k-variable analogue S_k(d).

Each quantity has an exact brute-force route and floating routes through
Dirichlet characters or additive characters; the floating routes are rounded
under a strict contract so that silent drift cannot leak into later fits.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from . import expsums
from .characters import character_transform, weighted_char_sums
from .modular import PrimeContext

DEFAULT_BUDGET = 10**9
ROUNDING_SLACK = 0.4
EXACT_BITS = 126


class CostCapExceeded(RuntimeError):
    """Estimated work exceeds the configured budget."""

    def __init__(self, what: str, cost: int, cap: int):
        super().__init__(f"{what} needs ~{cost} inner iterations, above the cap {cap}")
        self.cost = cost
        self.cap = cap


class RoundingContractError(ArithmeticError):
    """A floating route landed too far from an integer."""


def check_exact_budget(p: int, k: int) -> None:
    if p ** (k + 1) >= 2**EXACT_BITS:
        raise OverflowError(f"p^(k+1) = {p}^{k + 1} exceeds the exact budget 2^{EXACT_BITS}")


def _check_residue(ctx: PrimeContext, d: int) -> int:
    if d % ctx.p == 0:
        raise ValueError(f"d must be a unit modulo {ctx.p}, got {d}")
    return d % ctx.p


def round_exact(value: complex | float, imag_tol: float = 1e-6, target: int | None = None) -> int:
    """Nearest integer to ``value`` under the rounding contract.

    With ``target`` the value must lie within 0.4 of that integer, otherwise
    within 0.4 of its nearest integer.
    """
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise RoundingContractError(f"non-finite value {z}")
    if abs(z.imag) > imag_tol:
        raise RoundingContractError(f"imaginary part {z.imag:.3e} above {imag_tol:.1e}")
    n = round(z.real) if target is None else target
    if abs(z.real - n) > ROUNDING_SLACK:
        raise RoundingContractError(f"{z.real!r} is not within {ROUNDING_SLACK} of {n}")
    return int(n)


# ---- k = 2 -------------------------------------------------------------


def s_d_bruteforce(ctx: PrimeContext, d: int) -> int:
    """sum_{a=1}^{p-1} a * (d * inv(a) mod p), exactly, in O(p)."""
    d = _check_residue(ctx, d)
    return int(_kernels.inverse_product_single(ctx.inv_table, ctx.p, d))


@lru_cache(maxsize=16)
def s_table(ctx: PrimeContext) -> np.ndarray:
    """Exact S(d) for every d, index d (``S[0] = 0``); O(p^2) total."""
    out = _kernels.inverse_product_table(ctx.inv_table, ctx.p)
    out.setflags(write=False)
    return out


def s_mean(p: int) -> Fraction:
    """p^2 (p-1) / 4, the average of S(d) over d."""
    return Fraction(p * p * (p - 1), 4)


@lru_cache(maxsize=16)
def s_table_char(ctx: PrimeContext) -> np.ndarray:
    """Character route for all d as complex floats (index d)."""
    p = ctx.p
    coeffs = np.asarray(weighted_char_sums(ctx)) ** 2
    coeffs[0] = 0
    out = p * p * (p - 1) / 4 + character_transform(ctx, coeffs) / (p - 1)
    out[0] = 0
    out.setflags(write=False)
    return out


def s_d_char_formula(ctx: PrimeContext, d: int) -> float:
    """p^2(p-1)/4 + p^2/(p-1) * sum_{chi != chi_0} conj(chi)(d) L(0,chi)^2.

    Since L(0, chi) = -A(chi)/p with A(chi) = sum_a a chi(a), the sum is
    evaluated as (1/(p-1)) sum conj(chi)(d) A(chi)^2.
    """
    d = _check_residue(ctx, d)
    z = s_table_char(ctx)[d]
    round_exact(z)
    return float(z.real)


@lru_cache(maxsize=16)
def s_table_exp(ctx: PrimeContext) -> np.ndarray:
    """Additive-character route for all d as complex floats (index d)."""
    p = ctx.p
    out = p * (p - 1) ** 2 / 4 - expsums.exptemp_table(ctx)
    out[0] = 0
    out.setflags(write=False)
    return out


def s_d_exp_formula(ctx: PrimeContext, d: int) -> float:
    """p(p-1)^2/4 - sum_k W(k d) / (1 - e(-k/p)) with W(m) = sum_a a e(m inv(a)/p)."""
    d = _check_residue(ctx, d)
    z = s_table_exp(ctx)[d]
    round_exact(z)
    return float(z.real)


# ---- general k ---------------------------------------------------------


def _check_k(k: int) -> None:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")


def s_k_bruteforce(ctx: PrimeContext, k: int, d: int, budget: int = DEFAULT_BUDGET) -> int:
    """Exact S_k(d) by enumerating (a_1, ..., a_{k-1}); a_k = d / (a_1...a_{k-1}).

    The last free coordinate is swept by the compiled kernel, the rest in
    Python, so the cost is (p-1)^{k-1} kernel iterations.
    """
    _check_k(k)
    d = _check_residue(ctx, d)
    p = ctx.p
    check_exact_budget(p, k)
    cost = (p - 1) ** (k - 1)
    if cost > budget:
        raise CostCapExceeded(f"s_k_bruteforce(p={p}, k={k})", cost, budget)
    inv = ctx.inv_table
    total = 0
    for head in itertools.product(range(1, p), repeat=k - 2):
        weight = math.prod(head)
        r = weight % p
        target = d * int(inv[r]) % p
        total += weight * int(_kernels.inverse_product_single(inv, p, target))
    return total


def s_k_main_term(p: int, k: int) -> Fraction:
    """p^k (p-1)^{k-1} / 2^k, the principal-character contribution."""
    return Fraction(p**k * (p - 1) ** (k - 1), 2**k)


@lru_cache(maxsize=32)
def s_k_char_correction(ctx: PrimeContext, k: int) -> np.ndarray:
    """(1/(p-1)) sum_{chi != chi_0} conj(chi)(d) A(chi)^k for all d."""
    _check_k(k)
    coeffs = np.asarray(weighted_char_sums(ctx)) ** k
    coeffs[0] = 0
    out = character_transform(ctx, coeffs) / (ctx.p - 1)
    out.setflags(write=False)
    return out


def s_k_char_formula(ctx: PrimeContext, k: int, d: int) -> float:
    """Character route for S_k(d); O(p^2) for the first call at given k."""
    _check_k(k)
    d = _check_residue(ctx, d)
    return float(s_k_main_term(ctx.p, k)) + float(s_k_char_correction(ctx, k)[d].real)


def s_k_values(ctx: PrimeContext, k: int) -> list[int]:
    """Exact S_k(d) for d in ``[1, p-1]`` from the character route.

    The main term is kept as an exact rational and only the character
    correction is rounded, so precision tracks the correction's size.
    """
    check_exact_budget(ctx.p, k)
    main = s_k_main_term(ctx.p, k)
    base = math.floor(main)
    frac = float(main - base)
    corr = s_k_char_correction(ctx, k)
    scale = float(np.abs(weighted_char_sums(ctx)).max()) ** k
    imag_tol = max(1e-6, 1e-9 * scale)
    return [base + round_exact(frac + complex(c), imag_tol=imag_tol) for c in corr[1:]]


def s_k_table_convolution(ctx: PrimeContext, k: int) -> list[int]:
    """Exact S_k(d) for d in ``[1, p-1]`` via S_k(d) = sum_c c S_{k-1}(d inv(c)).

    Python integers throughout; O(k p^2). Index 0 of the result is d = 1.
    """
    _check_k(k)
    p = ctx.p
    inv = ctx.inv_table
    prev = [0] + [int(v) for v in s_table(ctx)[1:]]
    c = np.arange(1, p, dtype=np.int64).astype(object)
    for _ in range(k - 2):
        prev_arr = np.array(prev, dtype=object)
        cur = [0] * p
        for d in range(1, p):
            cur[d] = int((c * prev_arr[(d * inv[1:]) % p]).sum())
        prev = cur
    return prev[1:]
