"""Time the numpy and numba kernel flavours side by side.

    python3 benchmarks/bench_kernels.py [--sizes 500 2000 5000] [--repeat 5]

Each row reports the best of ``--repeat`` runs after one warm-up call, so
numba compilation is excluded.  The last column checks that both flavours
produced the same numbers (to the tolerance the test suite uses).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from nabla_fde import _kernels


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(K):
    c = _kernels.numpy_kernels.coefficients(1.5, K - 1)
    rhs = np.linspace(1.0, 2.0, K)
    x = np.cos(0.1 * np.arange(K))
    M = min(K, 500)
    return {
        "coefficients": lambda k: k.coefficients(1.5, K - 1),
        "causal_convolve": lambda k: k.causal_convolve(c, x),
        "volterra_march": lambda k: k.volterra_march(c, rhs, -0.2, 1 / 1.2, np.inf)[0],
        f"ml_log_grid(M={M})": lambda k: k.ml_log_grid(0.7, 1.0, np.log(0.5), True, M, 400)[0],
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[500, 2000, 5000])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)

    flavours = [_kernels.numpy_kernels]
    if _kernels.numba_available():
        flavours.append(_kernels.get_kernels("numba"))
    else:
        print("numba not installed; timing the numpy kernels only")

    head = f"{'kernel':<22} {'K':>6}" + "".join(f" {f.name + ' [ms]':>12}" for f in flavours)
    if len(flavours) == 2:
        head += f" {'speedup':>8} {'agree':>6}"
    print(head)
    print("-" * len(head))
    for K in args.sizes:
        for name, fn in cases(K).items():
            ts = [best_of(lambda f=f: fn(f), args.repeat) for f in flavours]
            row = f"{name:<22} {K:>6}" + "".join(f" {1e3 * t:>12.3f}" for t in ts)
            if len(flavours) == 2:
                a, b = (np.asarray(fn(f)) for f in flavours)
                agree = np.allclose(a, b, rtol=1e-10, atol=1e-12 * max(1.0, np.abs(a).max()))
                row += f" {ts[0] / ts[1]:>7.1f}x {str(agree):>6}"
            print(row)


if __name__ == "__main__":
    main()
