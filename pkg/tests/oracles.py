"""Literal-definition evaluators used as independent oracles.

Nothing here touches the package's tables or kernels: every sum is the
textbook loop over residues with Python integers and cmath.
"""

import cmath
import itertools
import math


def e(u):
    return cmath.exp(2j * math.pi * u)


def trial_division_is_prime(n):
    if n < 2:
        return False
    return all(n % q for q in range(2, math.isqrt(n) + 1))


def S_pairs(p, d):
    return sum(a * b for a in range(1, p) for b in range(1, p) if (a * b - d) % p == 0)


def S_k_tuples(p, k, d):
    total = 0
    for t in itertools.product(range(1, p), repeat=k):
        if (math.prod(t) - d) % p == 0:
            total += math.prod(t)
    return total


def least_primitive_root(p):
    for g in range(2, p):
        if len({pow(g, t, p) for t in range(p - 1)}) == p - 1:
            return g
    return 1


def D_grid(p, l):
    return sum(a * b * e(l * a * b / p) for a in range(1, p) for b in range(1, p))


def T_grid(p, l):
    return sum(
        a * b * c * e(l * a * b * c / p) for a in range(1, p) for b in range(1, p) for c in range(1, p)
    )


def kloosterman_literal(p, a, b):
    return sum(e((a * x + b * pow(x, -1, p)) / p) for x in range(1, p))
