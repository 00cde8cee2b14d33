"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints one row per workload with the best-of-N wall time of each backend and
the speedup, after checking that both return identical results.
"""
import argparse
import sys
import timeit

import numpy as np

from levelone import _purepy

try:
    from levelone import _kernels
except ImportError:
    _kernels = None


def workloads():
    rng = np.random.default_rng(0)
    for n in (10, 16, 20):
        v = rng.integers(0, 2, 1 << n).astype(float)
        yield f"wht n={n}", (lambda impl, v=v: impl.wht(v))
    for n, m in ((3, 4), (4, 5), (4, 8)):
        yield f"search n={n} m={m}", (lambda impl, n=n, m=m: impl.subset_search(n, m, True, 10_000, -1))


def same(a, b):
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return np.array_equal(a[0], b[0]) and sorted(a[1]) == sorted(b[1]) and a[2] == b[2]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; reinstall with Cython available", file=sys.stderr)
        return 1
    print(f"{'workload':<22}{'cython [ms]':>14}{'python [ms]':>14}{'speedup':>10}")
    for name, fn in workloads():
        if not same(fn(_kernels), fn(_purepy)):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 1
        tc = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(_purepy), number=1, repeat=args.repeat))
        print(f"{name:<22}{tc * 1e3:>14.3f}{tp * 1e3:>14.3f}{tp / tc:>10.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
