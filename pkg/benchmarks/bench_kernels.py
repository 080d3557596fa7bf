"""Time the compiled sample kernel against the numpy fallback.

    python3 benchmarks/bench_kernels.py --k 5 6 7 --repeat 3
"""
import argparse
import time

import numpy as np

from flowcoef import kernels
from flowcoef.perturb import optimal_point
from flowcoef.space import expand


def scaled_optimum(k):
    c = expand(optimal_point(k))
    flat = c.flat()
    den = 1
    for v in flat:
        den = den * v.denominator // np.gcd(den, v.denominator)
    return np.array([int(v * den) for v in flat], dtype=object).reshape(k, k, k)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=int, nargs="+", default=[5, 6, 7])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    backends = ["numpy"] + (["compiled"] if kernels.BACKEND == "compiled" else [])
    print(f"{'k':>3} {'samples':>10} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for k in args.k:
        m = scaled_optimum(k)
        res = {}
        for b in backends:
            res[b] = best_of(lambda: kernels.sample_values(m, threads=args.threads, backend=b), args.repeat)
        if len(backends) == 2:
            assert np.array_equal(res["numpy"][1], res["compiled"][1]), f"backends disagree at k={k}"
            speed = f"{res['numpy'][0] / res['compiled'][0]:8.1f}x"
        else:
            speed = "   (no compiled kernel)"
        n = len(res["numpy"][1])
        print(f"{k:>3} {n:>10} " + " ".join(f"{res[b][0]:>9.3f}s" for b in backends) + "  " + speed)


if __name__ == "__main__":
    main()
