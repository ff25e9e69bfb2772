"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--primes 503,1009,3001] [--repeat 3]
"""

import argparse
import time

import numpy as np

from invsum import build_context
from invsum._kernels import BACKENDS


def _cases(ctx):
    p = ctx.p
    roots = np.asarray(ctx.roots)
    inv = np.asarray(ctx.inv_table)
    w = inv.astype(np.complex128)
    return {
        "gather_sum": lambda m: m.gather_sum(roots, w, p),
        "inverse_product_table": lambda m: m.inverse_product_table(inv, p),
        "kloosterman_row": lambda m: m.kloosterman_row(inv, roots, p, 1),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", default="503,1009,3001")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = sorted(BACKENDS)
    print(f"{'kernel':<24}{'p':>6}" + "".join(f"{n + ' [ms]':>16}" for n in names) + f"{'speedup':>10}")
    for p in (int(x) for x in args.primes.split(",")):
        ctx = build_context(p)
        for kernel, fn in _cases(ctx).items():
            t = {n: best_of(lambda: fn(BACKENDS[n]), args.repeat) for n in names}
            ref = fn(BACKENDS["python"])
            for n in names:
                assert np.allclose(fn(BACKENDS[n]), ref, rtol=1e-9, atol=1e-6), (kernel, n)
            speed = t["python"] / t["cython"] if "cython" in t else float("nan")
            print(f"{kernel:<24}{p:>6}" + "".join(f"{t[n] * 1e3:>16.2f}" for n in names) + f"{speed:>10.1f}")


if __name__ == "__main__":
    main()
