#!/usr/bin/env python3
"""Timing comparison of the jitted kernels against the numpy/Python fallback.

Runs each hot kernel on both paths in-process (the numba implementations are
importable regardless of the LDKIT_NO_NUMBA flag) and prints a table of
per-call times and speedups. Requires numba; without it only the fallback
column is reported.
"""

import math
import sys
import time

import numpy as np

sys.path.insert(0, "src")

from ldkit import _kernels as K  # noqa: E402
import ldkit as lk  # noqa: E402


def timeit(fn, *args, repeat=5, min_time=0.2):
    fn(*args)  # warm up (and JIT-compile)
    best = math.inf
    for _ in range(repeat):
        n = 0
        t0 = time.perf_counter()
        while True:
            fn(*args)
            n += 1
            dt = time.perf_counter() - t0
            if dt > min_time:
                break
        best = min(best, dt / n)
    return best


def main():
    rows = []
    qs = np.linspace(-3.0, 3.0, 4096)

    def bench(name, nb_fn, np_fn, *args):
        t_np = timeit(np_fn, *args)
        if K.HAVE_NUMBA:
            t_nb = timeit(nb_fn, *args)
            rows.append((name, t_nb, t_np, t_np / t_nb))
        else:
            rows.append((name, math.nan, t_np, math.nan))

    bench("integrand values (4096 nodes)",
          K.nb_integrand_values if K.HAVE_NUMBA else None,
          K.np_integrand_values, K.PENDULUM, qs, -0.5)
    bench("branch values (4096 nodes)",
          K.nb_branch_values if K.HAVE_NUMBA else None,
          K.np_branch_values, K.PENDULUM, qs, -0.5)
    bench("chord sum (1e6 segments)",
          K.nb_polyline_length if K.HAVE_NUMBA else None,
          K.np_polyline_length, K.PENDULUM, -1.5, 1.5, -0.5, 1_000_000)
    bench("arc-length ODE, one trajectory (t=20)",
          K.nb_dp45_arclength if K.HAVE_NUMBA else None,
          K.np_dp45_arclength, K.PENDULUM, 0.3, 1.3, 20.0, 1e-10, 1e-12,
          math.inf, 10_000_000, False)

    print(f"numba available: {K.HAVE_NUMBA}; active path: "
          f"{'numba' if K.USE_NUMBA else 'numpy'} "
          f"(set LDKIT_NO_NUMBA=1 to force the fallback)\n")
    print(f"{'kernel':42s} {'numba':>12s} {'numpy':>12s} {'speedup':>9s}")
    for name, t_nb, t_np, speed in rows:
        nb = f"{t_nb * 1e3:9.3f} ms" if math.isfinite(t_nb) else "       n/a"
        sp = f"{speed:8.1f}x" if math.isfinite(speed) else "      n/a"
        print(f"{name:42s} {nb:>12s} {t_np * 1e3:9.3f} ms {sp:>9s}")

    # one end-to-end number: a landscape through the active path
    pend = lk.pendulum()
    t = timeit(lambda: lk.landscape(pend, -2.0, 1.0, 101), repeat=3)
    print(f"\nlandscape(pendulum, 101 samples) via active path: {t * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
