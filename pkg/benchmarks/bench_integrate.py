"""Compare the compiled and pure-Python integration kernels.

    python benchmarks/bench_integrate.py [--steps N] [--repeats R]

Both kernels get the same Mackey-Glass and Lasota workloads.  The script
reports the best wall time of each and checks that the trajectories are
bitwise identical.
"""
import argparse
import sys
import time

import numpy as np

from delaystab import _ddecore_py

try:
    from delaystab import _ddecore
except ImportError:
    _ddecore = None

WORKLOADS = {
    # name: (model, beta, gamma, n, eta, tau, x0, h)
    "mackey-glass tau=1.3": (0, 0.8, 0.3, 10.0, 1.0, 1.3, 0.5, 0.01),
    "lasota tau=21.69": (1, 0.9, 0.1, 0.1, 1.0, 21.69, 0.5, 0.05),
}


def best_time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)
    if _ddecore is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation` first")
        return 1
    print(f"{'workload':24s} {'steps':>8s} {'cython [s]':>11s} {'python [s]':>11s} {'speedup':>8s}  identical")
    ok = True
    for name, (model, beta, gamma, n, eta, tau, x0, h) in WORKLOADS.items():
        call = (model, beta, gamma, n, eta, tau, x0, h, args.steps)
        t_c, (xc, dxc, _) = best_time(lambda: _ddecore.integrate_kernel(*call), args.repeats)
        t_p, (xp, dxp, _) = best_time(lambda: _ddecore_py.integrate_kernel(*call), args.repeats)
        same = np.array_equal(np.asarray(xc), xp) and np.array_equal(np.asarray(dxc), dxp)
        ok &= same
        print(f"{name:24s} {args.steps:8d} {t_c:11.4f} {t_p:11.4f} {t_p / t_c:7.1f}x  {same}")
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
