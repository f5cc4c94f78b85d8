#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-NumPy fallbacks.

Times the hot array kernels (image sums, dual resolvent sums, heat traces,
eigenvalue trace sums) and the special-function grid evaluations through
both backends and prints a speedup table.  Run with numba installed; the
NumPy numbers are what you get under ``CONEKREIN_NUMBA=0``.

Usage:
    python benchmarks/benchmark_kernels.py [--repeat 7] [--sizes 1000,10000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np


def best_time(fn, repeat):
    # one extra call outside the timer pays any remaining JIT cost
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def run(repeat, sizes):
    from conekrein import _kernels_numpy as knp
    from conekrein import _sf_scalar, _sf_vector

    try:
        from conekrein import _kernels_numba as knb
    except ImportError:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        norms = np.sort(rng.uniform(0.2, 35.0, size=n))
        xi2 = np.sort(rng.uniform(0.0, 1e5, size=n))
        mu = np.sort(rng.uniform(1.0, 5e3, size=n))
        lam = mu + rng.uniform(0.0, 3.0, size=n)
        ones = np.ones(n)
        ts = np.geomspace(1e-2, 2.0, 24)

        cases = [
            (f"lattice_k0_sum (n={n})",
             lambda: knb.lattice_k0_sum(1.0, norms),
             lambda: knp.lattice_k0_sum(1.0, norms)),
            (f"resolvent_pair_sum (n={n})",
             lambda: knb.resolvent_pair_sum(-3.0, -1.0, xi2),
             lambda: knp.resolvent_pair_sum(-3.0, -1.0, xi2)),
            (f"heat_trace_diff (n={n}, 24 t)",
             lambda: knb.heat_trace_diff(ts, mu, ones, lam, ones),
             lambda: knp.heat_trace_diff(ts, mu, ones, lam, ones)),
            (f"resolvent_trace_sum (n={n})",
             lambda: knb.resolvent_trace_sum(-1.0, mu, ones, lam, ones),
             lambda: knp.resolvent_trace_sum(-1.0, mu, ones, lam, ones)),
        ]
        for name, f_nb, f_np in cases:
            a, b = best_time(f_nb, repeat), best_time(f_np, repeat)
            rows.append((name, a, b))

    # special functions on a grid: scalar njit loop vs masked-vector numpy
    import numba

    xs = np.ascontiguousarray(np.geomspace(1e-2, 99.0, 4096))

    @numba.njit(cache=True)
    def k_loop_njit(x, out):
        for i in range(x.size):
            out[i] = _sf_scalar.besselk_scalar(0.4, x[i], 15.0, 400)

    out = np.empty_like(xs)
    rows.append((
        "bessel_k grid (4096 pts)",
        best_time(lambda: k_loop_njit(xs, out), repeat),
        best_time(lambda: _sf_vector.besselk_vec(0.4, xs, 15.0, 400), repeat),
    ))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'numba':>10}  {'numpy':>10}  {'speedup':>8}")
    for name, a, b in rows:
        print(f"{name:<{width}}  {a*1e3:9.3f}ms  {b*1e3:9.3f}ms  {b/a:7.1f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=7)
    ap.add_argument("--sizes", default="2000,20000")
    args = ap.parse_args()
    run(args.repeat, [int(s) for s in args.sizes.split(",")])


if __name__ == "__main__":
    main()
