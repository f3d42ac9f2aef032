#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the two hot paths on representative workloads:

* per-series exhaustive hindcast (one long series, many origins);
* surrogate replication (simulate a 53-series corpus profile and hindcast
  it), the inner loop of every Monte Carlo experiment.

Usage: python benchmarks/bench_kernels.py [--reps 200]
"""

import argparse
import time

import numpy as np

from costwalk import corpus_template, load_reference_params
from costwalk._kernels import _fallback
from costwalk.stats import derive_rng

try:
    from costwalk._kernels import _native
except ImportError:
    _native = None


def _time(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_hindcast(backend, y, m, tau_max, loops=200):
    def run():
        for _ in range(loops):
            backend.hindcast_errors(y, m, tau_max)

    return _time(run) / loops


def bench_surrogate(backend, lengths, drifts, vols, theta, m, tau_max, reps):
    sigma = vols / np.sqrt(1 + theta * theta)

    def run():
        for rep in range(reps):
            rng = derive_rng(42, rep)
            v = np.concatenate([s * rng.standard_normal(n) for n, s in zip(lengths, sigma)])
            backend.corpus_norm_errors(lengths, drifts, theta, v, m, tau_max)

    return _time(run, repeat=3) / reps


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=200, help="surrogate replications per timing")
    args = parser.parse_args()

    rng = derive_rng(7, 0)
    y = np.concatenate(([0.0], np.cumsum(-0.05 + 0.1 * rng.standard_normal(99))))

    template = corpus_template(load_reference_params(improving_only=True))
    lengths = np.array([t[0] for t in template], dtype=np.int64)
    drifts = np.array([t[1] for t in template])
    vols = np.array([t[2] for t in template])

    backends = [("fallback", _fallback)]
    if _native is not None:
        backends.insert(0, ("native", _native))
    else:
        print("compiled kernels not built; timing the fallback only\n")

    rows = []
    for name, backend in backends:
        t_hind = bench_hindcast(backend, y, 5, 20)
        t_surr = bench_surrogate(backend, lengths, drifts, vols, 0.63, 5, 20, args.reps)
        rows.append((name, t_hind, t_surr))

    print(f"{'backend':<10} {'hindcast T=100,m=5':>22} {'surrogate 53-series rep':>26}")
    for name, t_hind, t_surr in rows:
        print(f"{name:<10} {t_hind * 1e6:>18.1f} us {t_surr * 1e6:>22.1f} us")
    if len(rows) == 2:
        print(
            f"{'speedup':<10} {rows[1][1] / rows[0][1]:>20.1f}x {rows[1][2] / rows[0][2]:>24.1f}x"
        )


if __name__ == "__main__":
    main()
