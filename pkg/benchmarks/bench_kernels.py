"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--trials N] [--repeat R]

Inputs are drawn once and fed to both backends; the script also checks that
their outputs are identical.
"""
import argparse
import time

import numpy as np

from subsec import kernels
from subsec.oracles import sample_random_instance


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def sorted_arrivals(rng, trials, n):
    times = rng.random((trials, n))
    order = np.argsort(times, axis=1, kind="stable")
    return order, np.take_along_axis(times, order, axis=1)


def cases(trials):
    rng = np.random.default_rng(0)
    for n in (10, 50):
        order, times = sorted_arrivals(rng, trials, n)
        weights = rng.permutation(n) + 1.0
        coins = rng.random(trials)
        yield f"secretary n={n}", lambda be, a=(weights, order, times, coins): be.secretary_batch(*a)
    for kind, params, k in (("coverage", {"n": 12, "universe": 20, "p": 0.3}, 4),
                            ("cut", {"n": 10, "edge_prob": 0.5, "max_weight": 5}, 4),
                            ("modular", {"n": 15, "max_weight": 10}, 5)):
        oracle = sample_random_instance(kind, params, rng)
        order, times = sorted_arrivals(rng, trials, oracle.n)
        coins = rng.random((trials, k))
        payload = kernels.pack(oracle)
        yield (f"submodular {kind} n={oracle.n} k={k}",
               lambda be, a=(payload, k, order, times, coins): be.submodular_secretary_batch(*a))


def same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=20_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if "cython" not in kernels.BACKENDS:
        print("compiled kernels not built; only the Python fallback is available")
    print(f"{'kernel':<34} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8}  match")
    for name, run in cases(args.trials):
        t_py, out_py = best_of(lambda: run(kernels.BACKENDS["python"]), args.repeat)
        if "cython" in kernels.BACKENDS:
            t_cy, out_cy = best_of(lambda: run(kernels.BACKENDS["cython"]), args.repeat)
            print(f"{name:<34} {t_py:>11.4f} {t_cy:>11.4f} {t_py / t_cy:>7.1f}x  {same(out_py, out_cy)}")
        else:
            print(f"{name:<34} {t_py:>11.4f} {'-':>11} {'-':>8}  -")


if __name__ == "__main__":
    main()
