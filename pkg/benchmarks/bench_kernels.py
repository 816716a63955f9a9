"""Time the level-n quotient BFS with the numba kernel and the numpy fallback.

    python3 benchmarks/bench_kernels.py --levels 3 4 5 --repeat 3
"""

import argparse
import time

from wreathgrowth import _accel
from wreathgrowth.growth import quotient_diameter


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return result, min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    kernels = ["numpy"] + (["numba"] if _accel.HAVE_NUMBA else [])
    if _accel.HAVE_NUMBA:
        quotient_diameter(3, kernel="numba")  # compile outside the timings
    print(f"{'level':>5} {'kernel':>7} {'diameter':>8} {'order':>9} {'seconds':>9}")
    for n in args.levels:
        results = set()
        for k in kernels:
            res, t = best_of(lambda: quotient_diameter(n, kernel=k), args.repeat)
            results.add(res)
            print(f"{n:>5} {k:>7} {res[0]:>8} {res[1]:>9} {t:>9.4f}")
        if len(results) != 1:
            raise SystemExit(f"kernels disagree at level {n}: {results}")


if __name__ == "__main__":
    main()
