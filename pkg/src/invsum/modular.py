"""Exact arithmetic modulo an odd prime: primality, primitive roots, inverse
and discrete-log tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# Deterministic for n < 3.3e24, which covers all 64-bit inputs.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

# Dense tables are int64; keep p well inside the exact-sum budget.
MAX_TABLE_PRIME = 2_000_000


class UnsupportedModulusError(ValueError):
    """Raised for p = 2, where the sums studied here degenerate."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit inputs."""
    if n < 2:
        raise ValueError(f"is_prime needs n >= 2, got {n}")
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in_range(lo: int, hi: int) -> list[int]:
    """All primes in ``[lo, hi]`` ascending; empty when ``lo > hi``."""
    if lo > hi:
        return []
    if lo < 2:
        raise ValueError(f"primes_in_range needs lo >= 2, got {lo}")
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, int(hi**0.5) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return [int(x) for x in np.flatnonzero(sieve[lo:]) + lo]


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def primitive_root(p: int) -> int:
    """Least primitive root modulo the prime ``p``."""
    if p == 2:
        return 1
    cofactors = [(p - 1) // q for q in prime_factors(p - 1)]
    g = 2
    while any(pow(g, c, p) == 1 for c in cofactors):
        g += 1
    return g


def mod_inverse(a: int, p: int) -> int:
    """The representative of a^{-1} mod p in ``[1, p-1]``."""
    if a % p == 0:
        raise ValueError(f"{a} is not invertible modulo {p}")
    return pow(a, -1, p)


def _check_modulus(p: int) -> None:
    if p == 2:
        raise UnsupportedModulusError("p = 2 is not supported; the character sums degenerate")
    if p < 2 or not is_prime(p):
        raise ValueError(f"modulus must be an odd prime, got {p}")
    if p > MAX_TABLE_PRIME:
        raise OverflowError(f"p = {p} exceeds the dense-table limit {MAX_TABLE_PRIME}")


@dataclass(frozen=True, eq=False)
class PrimeContext:
    """Shared tables for one odd prime.

    ``inv_table`` and ``dlog_table`` have length ``p`` with index 0 unused
    (set to 0) so that residues index them directly. ``pow_table[t] = g^t``.
    """

    p: int
    g: int
    inv_table: np.ndarray = field(repr=False)
    dlog_table: np.ndarray = field(repr=False)
    pow_table: np.ndarray = field(repr=False)

    @property
    def roots(self) -> np.ndarray:
        """``roots[m] = e(m/p)`` for m in ``[0, p)``."""
        return _roots(self.p)

    def inv(self, a: int) -> int:
        return int(self.inv_table[a % self.p])

    def dlog(self, a: int) -> int:
        r = a % self.p
        if r == 0:
            raise ValueError("discrete log of 0 is undefined")
        return int(self.dlog_table[r])


@lru_cache(maxsize=64)
def _roots(p: int) -> np.ndarray:
    out = np.exp(2j * np.pi * np.arange(p) / p)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=64)
def build_context(p: int) -> PrimeContext:
    """Build (and cache) the tables for the odd prime ``p`` in O(p)."""
    _check_modulus(p)
    g = primitive_root(p)
    pow_table = np.empty(p - 1, dtype=np.int64)
    dlog = np.zeros(p, dtype=np.int64)
    x = 1
    for t in range(p - 1):
        pow_table[t] = x
        dlog[x] = t
        x = x * g % p
    # g^{-t} = g^{p-1-t}
    inv = np.zeros(p, dtype=np.int64)
    inv[pow_table] = pow_table[(-np.arange(p - 1)) % (p - 1)]
    for arr in (pow_table, dlog, inv):
        arr.setflags(write=False)
    return PrimeContext(p=p, g=g, inv_table=inv, dlog_table=dlog, pow_table=pow_table)
