"""Wall time of a whole sweep under each kernel backend, in fresh processes.

    python benchmarks/bench_sweep.py [--range 1000:1500] [--stat thm1_max_err,thm2_M,lemma4_max]
"""

import argparse
import os
import subprocess
import sys
import time


def run(pure, args):
    env = dict(os.environ, INVSUM_PURE="1" if pure else "0")
    cmd = [sys.executable, "-m", "invsum", "sweep", "--threads", "1", "--range", args.range, "--stat", args.stat]
    t0 = time.perf_counter()
    out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True).stdout
    return time.perf_counter() - t0, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--range", default="1000:1500")
    ap.add_argument("--stat", default="thm1_max_err,thm2_M,lemma4_max")
    args = ap.parse_args()
    t_c, out_c = run(False, args)
    t_py, out_py = run(True, args)
    rows = len(out_c.splitlines()) - 1
    exact_c = [r.split(",")[:3] for r in out_c.splitlines()[1:] if r.split(",")[6] == "1"]
    exact_py = [r.split(",")[:3] for r in out_py.splitlines()[1:] if r.split(",")[6] == "1"]
    print(f"sweep {args.stat} over {args.range}: {rows} rows")
    print(f"  cython  {t_c:8.2f} s")
    print(f"  python  {t_py:8.2f} s   ({t_py / t_c:.1f}x slower)")
    print(f"  exact columns identical: {exact_c == exact_py}")


if __name__ == "__main__":
    main()
