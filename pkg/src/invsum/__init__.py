"""Sums of a * inv(a) modulo a prime, computed by independent routes."""

from ._kernels import BACKEND
from .modular import PrimeContext, build_context, is_prime, mod_inverse, primes_in_range

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "PrimeContext",
    "build_context",
    "is_prime",
    "mod_inverse",
    "primes_in_range",
]
