"""Compare the numba kernels with the pure-numpy fallback.

Times a single BSADF sweep and a batch of null replications per backend and
checks that both return the same statistics.

    python benchmarks/bench_backends.py --t 200 --reps 200
"""
import argparse
import time

import numpy as np

from exuberance import _kernels_numpy as npk
from exuberance.recursive import min_window

try:
    from exuberance import _kernels_numba as nbk
except ImportError:
    nbk = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t", type=int, default=200)
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--lag", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    w0 = min_window(args.t, args.lag)
    Y = np.cumsum(rng.standard_normal((args.reps, args.t)), axis=1)
    Y = np.ascontiguousarray(Y - Y.mean(axis=1, keepdims=True))
    x = Y[0].copy()

    backends = {"numpy": npk}
    if nbk is not None:
        backends["numba"] = nbk
        # compile outside the timed region
        hi, lo = nbk.prefix_moments(x, args.lag)
        nbk.bsadf(hi, lo, args.lag, w0)
        nbk.gsadf_batch(Y[:2], args.lag, w0)

    print(f"T={args.t} lag={args.lag} w0={w0} reps={args.reps} (best of {args.repeat})")
    print(f"{'backend':<8}{'bsadf sweep':>14}{'null batch':>14}{'per rep':>12}")
    results = {}
    for name, k in backends.items():
        def sweep():
            hi, lo = k.prefix_moments(x, args.lag)
            return k.bsadf(hi, lo, args.lag, w0)

        t_sweep, sw = best_of(sweep, args.repeat)
        t_batch, batch = best_of(lambda: k.gsadf_batch(Y, args.lag, w0), args.repeat)
        results[name] = (sw, batch)
        print(f"{name:<8}{t_sweep * 1e3:>12.2f}ms{t_batch:>13.3f}s{t_batch / args.reps * 1e3:>10.2f}ms")

    if "numba" in results:
        (sa, ba), (sb, bb) = results["numpy"], results["numba"]
        diff = max(float(np.nanmax(np.abs(np.asarray(u) - np.asarray(v)))) for u, v in zip(sa[:1] + ba[:3], sb[:1] + bb[:3]))
        same_start = np.array_equal(sa[1], sb[1])
        print(f"max abs difference {diff:.2e}; argmax starts identical: {same_start}")


if __name__ == "__main__":
    main()
