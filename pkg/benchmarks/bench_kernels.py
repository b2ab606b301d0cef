"""Time the compiled kernels against the numpy fallback and the brute-force oracle.

    python3 benchmarks/bench_kernels.py [--sizes 200 1000 5000] [--dims 1 2 3] [--repeat 3]

Every timed result is also checked for equality across paths, so a speedup
is never reported for an answer that differs.
"""

import argparse
import time

import numpy as np

from hausdorff_hyperspace import PointSet, hausdorff_distance, hausdorff_distance_oracle, kernels
from hausdorff_hyperspace.metric import greedy_net_indices

ORACLE_LIMIT = 4000  # the oracle builds the full distance matrix


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_hausdorff(n, d, repeat, rng):
    A = PointSet(rng.normal(size=(n, d)))
    B = PointSet(rng.normal(size=(n, d)) + 0.1)
    row = {}
    results = []
    for name in kernels.available_backends():
        with kernels.use_backend(name):
            row[name], res = best_of(lambda: hausdorff_distance(A, B), repeat)
        results.append(res)
    if n <= ORACLE_LIMIT:
        row["oracle"], res = best_of(lambda: hausdorff_distance_oracle(A, B), repeat)
        results.append(res)
    assert all(r == results[0] for r in results), "paths disagree"
    return row


def bench_net(n, d, repeat, rng):
    P = rng.uniform(size=(n, d))
    delta = 0.5 * n ** (-1.0 / d)
    row, results = {}, []
    for name in kernels.available_backends():
        with kernels.use_backend(name):
            row[name], res = best_of(lambda: greedy_net_indices(P, delta), repeat)
        results.append(res)
    assert all(np.array_equal(r, results[0]) for r in results), "paths disagree"
    return row


def show(title, rows):
    cols = ["cython", "python", "oracle"]
    print(f"\n{title}")
    print(f"{'n':>8} {'d':>2} " + " ".join(f"{c:>10}" for c in cols) + f" {'speedup':>8}")
    for (n, d), row in rows:
        cells = " ".join(f"{row[c] * 1e3:9.2f}m" if c in row else f"{'-':>10}" for c in cols)
        speed = row["python"] / row["cython"] if "cython" in row else float("nan")
        print(f"{n:>8} {d:>2} {cells} {speed:7.1f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[200, 1000, 5000, 20000])
    ap.add_argument("--dims", type=int, nargs="+", default=[1, 2, 3, 5])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"backends: {', '.join(kernels.available_backends())} (default {kernels.BACKEND})")
    grid = [(n, d) for n in args.sizes for d in args.dims]
    show("hausdorff_distance, n x n points (milliseconds)",
         [((n, d), bench_hausdorff(n, d, args.repeat, rng)) for n, d in grid])
    show("greedy net, n points (milliseconds)",
         [((n, d), bench_net(n, d, args.repeat, rng)) for n, d in grid])


if __name__ == "__main__":
    main()
