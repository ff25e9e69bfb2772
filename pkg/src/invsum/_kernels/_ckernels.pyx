# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled O(n^2) kernels. Signatures mirror ``_pykernels``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def gather_sum(const double complex[::1] x, const double complex[::1] w, Py_ssize_t n):
    """out[k] = sum_{b<n} w[b] * x[(k*b) mod n], Kahan-compensated."""
    cdef Py_ssize_t k, b, idx
    cdef double sr, si, cr, ci, yr, yi, tr, ti
    cdef double complex term
    out = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    with nogil:
        for k in range(n):
            sr = 0.0
            si = 0.0
            cr = 0.0
            ci = 0.0
            idx = 0
            for b in range(n):
                term = w[b] * x[idx]
                yr = term.real - cr
                tr = sr + yr
                cr = (tr - sr) - yr
                sr = tr
                yi = term.imag - ci
                ti = si + yi
                ci = (ti - si) - yi
                si = ti
                idx = idx + k
                if idx >= n:
                    idx = idx - n
            o[k] = sr + 1j * si
    return out


def inverse_product_table(const cnp.int64_t[::1] inv, Py_ssize_t p):
    """out[d] = sum_{a=1}^{p-1} a * ((d * inv[a]) mod p); out[0] = 0."""
    cdef Py_ssize_t a, d
    cdef cnp.int64_t r, step
    out = np.zeros(p, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    with nogil:
        for a in range(1, p):
            step = inv[a]
            r = 0
            for d in range(1, p):
                r = r + step
                if r >= p:
                    r = r - p
                o[d] = o[d] + a * r
    return out


def inverse_product_single(const cnp.int64_t[::1] inv, Py_ssize_t p, Py_ssize_t d):
    cdef Py_ssize_t a
    cdef cnp.int64_t acc = 0
    with nogil:
        for a in range(1, p):
            acc = acc + a * ((d * inv[a]) % p)
    return acc


def kloosterman_row(const cnp.int64_t[::1] inv, const double complex[::1] roots,
                    Py_ssize_t p, Py_ssize_t a):
    """out[b] = sum_{x=1}^{p-1} e((a*x + b*inv[x]) / p) for b in [0, p)."""
    cdef Py_ssize_t b, x
    cdef double sr, si, cr, ci, yr, yi, tr, ti
    resid = np.zeros(p, dtype=np.int64)
    out = np.zeros(p, dtype=np.complex128)
    cdef cnp.int64_t[::1] r = resid
    cdef double complex[::1] o = out
    for x in range(1, p):
        r[x] = (a * x) % p
    with nogil:
        for b in range(p):
            sr = 0.0
            si = 0.0
            cr = 0.0
            ci = 0.0
            for x in range(1, p):
                yr = roots[r[x]].real - cr
                tr = sr + yr
                cr = (tr - sr) - yr
                sr = tr
                yi = roots[r[x]].imag - ci
                ti = si + yi
                ci = (ti - si) - yi
                si = ti
                r[x] = r[x] + inv[x]
                if r[x] >= p:
                    r[x] = r[x] - p
            o[b] = sr + 1j * si
    return out
