"""Compare the numba and numpy kernels behind the numeric oracles.

    python benchmarks/bench_kernels.py [--samples N] [--repeat R]
"""

import argparse
import math
import time

import numpy as np

from cakecut import kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    xs, ys = kernels.disk_samples(1.0, args.samples, seed=0)
    rays = np.array([0.0, 2 * math.pi / 3, 4 * math.pi / 3])
    p, q = np.array([-1.0, 0.0]), np.array([3.0, 0.0])
    centers = np.array([[0.0, 0.0], [2.0, 0.0], [1.0, math.sqrt(3.0)]])
    radii = np.ones(3)

    cases = {
        "sector_counts": (
            lambda: kernels.sector_counts_numpy(xs, ys, 1.0, rays),
            lambda: kernels.sector_counts_numba(xs, ys, 1.0, rays),
        ),
        "segment_covered": (
            lambda: kernels.segment_covered_numpy(p, q, centers, radii, 10_000, 1e-9),
            lambda: kernels.segment_covered_numba(p, q, centers, radii, 10_000, 1e-9),
        ),
    }
    print(f"active backend: {kernels.BACKEND}; samples={args.samples}")
    for name, (np_fn, nb_fn) in cases.items():
        assert np.array_equal(np.asarray(np_fn()), np.asarray(nb_fn()))  # also warms the jit
        t_np = best_of(np_fn, args.repeat)
        t_nb = best_of(nb_fn, args.repeat)
        print(f"{name:16s} numpy {t_np * 1e3:8.2f} ms   numba {t_nb * 1e3:8.2f} ms   speedup {t_np / t_nb:5.1f}x")


if __name__ == "__main__":
    main()
