"""Time the compiled partition-search kernel against the pure-Python fallback.

Usage: python benchmarks/bench_kernel.py [--sizes 10 11 12] [--repeat 3]
"""
import argparse
import time

import numpy as np

from kanon import _kernel, _search_py
from kanon.gen import gen_random


def _best_time(fn, V, k, revenue, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(V, k, 0, revenue)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 11, 12])
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernel.BACKEND != "cython":
        print("compiled extension not available; only the fallback will be timed")
    print(f"{'m':>3} {'objective':>9} {'compiled s':>11} {'python s':>10} {'speedup':>8}")
    for m in args.sizes:
        V = np.asarray(gen_random(4, m, args.k, seed=m).values, dtype=float)
        for revenue in (False, True):
            py_t, py_out = _best_time(_search_py.best_partition, V, args.k, revenue, args.repeat)
            if _kernel.BACKEND == "cython":
                c_t, c_out = _best_time(_kernel.best_partition, V, args.k, revenue, args.repeat)
                assert c_out[:2] == py_out[:2], "backends disagree"
                cells = f"{c_t:11.4f} {py_t:10.4f} {py_t / c_t:7.1f}x"
            else:
                cells = f"{'-':>11} {py_t:10.4f} {'-':>8}"
            print(f"{m:>3} {'revenue' if revenue else 'welfare':>9} {cells}")


if __name__ == "__main__":
    main()
