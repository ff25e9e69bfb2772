"""Pure numpy implementations of the hot kernels.

Same contracts as the compiled module; rows are processed in blocks so the
index matrices stay within a few tens of megabytes.
"""

import numpy as np

_BLOCK_ELEMS = 1 << 21


def _row_blocks(n):
    step = max(1, _BLOCK_ELEMS // max(n, 1))
    for start in range(0, n, step):
        yield start, min(n, start + step)


def gather_sum(x, w, n):
    x = np.ascontiguousarray(x, dtype=np.complex128)
    w = np.ascontiguousarray(w, dtype=np.complex128)
    out = np.empty(n, dtype=np.complex128)
    b = np.arange(n, dtype=np.int64)
    for lo, hi in _row_blocks(n):
        k = np.arange(lo, hi, dtype=np.int64)[:, None]
        out[lo:hi] = (w[None, :] * x[(k * b[None, :]) % n]).sum(axis=1)
    return out


def inverse_product_table(inv, p):
    inv = np.asarray(inv, dtype=np.int64)
    a = np.arange(1, p, dtype=np.int64)
    ia = inv[1:p]
    out = np.zeros(p, dtype=np.int64)
    for lo, hi in _row_blocks(p - 1):
        d = np.arange(lo + 1, hi + 1, dtype=np.int64)[:, None]
        out[lo + 1:hi + 1] = (((d * ia[None, :]) % p) * a[None, :]).sum(axis=1)
    return out


def inverse_product_single(inv, p, d):
    inv = np.asarray(inv, dtype=np.int64)
    a = np.arange(1, p, dtype=np.int64)
    return int((a * ((d * inv[1:p]) % p)).sum())


def kloosterman_row(inv, roots, p, a):
    inv = np.asarray(inv, dtype=np.int64)
    roots = np.asarray(roots, dtype=np.complex128)
    x = np.arange(1, p, dtype=np.int64)
    base = (a * x) % p
    ix = inv[1:p]
    out = np.empty(p, dtype=np.complex128)
    for lo, hi in _row_blocks(p):
        b = np.arange(lo, hi, dtype=np.int64)[:, None]
        out[lo:hi] = roots[(base[None, :] + b * ix[None, :]) % p].sum(axis=1)
    return out
