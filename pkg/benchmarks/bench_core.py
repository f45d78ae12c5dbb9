"""Compare the compiled kernel loops with the numpy fallback.

Run with ``python3 benchmarks/bench_core.py [--sizes 200 800 2000]``.
"""
import argparse
import timeit

import numpy as np

from shiftspline import _fallback

try:
    from shiftspline import _core
except ImportError:  # pragma: no cover
    _core = None


def _time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def run(sizes, repeat=5, c=1.0, half_lambda=1, sign=1.0):
    rng = np.random.default_rng(0)
    rows = []
    for N in sizes:
        X = rng.random((N, 2))
        E = rng.random((4 * N, 2))
        w = rng.standard_normal(N)
        for name, args in (("kernel_matrix", (X, X, c, half_lambda, sign)),
                           ("kernel_matvec", (E, X, w, c, half_lambda, sign))):
            t_np = _time(lambda: getattr(_fallback, name)(*args), repeat)
            if _core is None:
                rows.append((name, N, t_np, float("nan"), float("nan"), float("nan")))
                continue
            t_cy = _time(lambda: getattr(_core, name)(*args), repeat)
            diff = np.abs(np.asarray(getattr(_core, name)(*args))
                          - getattr(_fallback, name)(*args)).max()
            rows.append((name, N, t_np, t_cy, t_np / t_cy, diff))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[200, 800, 2000])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _core is None:
        print("compiled extension not built; timing the numpy fallback only")
    print(f"{'function':<14}{'N':>6}{'numpy [s]':>12}{'cython [s]':>12}{'speedup':>9}{'max |diff|':>12}")
    for name, N, t_np, t_cy, speedup, diff in run(args.sizes, args.repeat):
        print(f"{name:<14}{N:>6}{t_np:>12.4f}{t_cy:>12.4f}{speedup:>9.2f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
