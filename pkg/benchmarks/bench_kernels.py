"""Compare the numba and pure-numpy kernel backends.

The backend is chosen at import time from GAUSSMIN_BACKEND, so each
backend is timed in its own subprocess. Run from the repository root:

    python3 benchmarks/bench_kernels.py

Workloads mirror the hot paths: Monte Carlo min-|dot| blocks, the
interval box integrand behind the certificate, and the signed-permutation
quadratic form behind canonical distances.
"""

import argparse
import json
import math
import os
import subprocess
import sys
import time
from itertools import permutations, product

import numpy as np


def _time(fn, repeats: int) -> float:
    fn()  # warmup (JIT compile / cache touch)
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_worker() -> dict:
    from gaussmin import _kernels

    rng = np.random.default_rng(12345)
    points = rng.standard_normal((1 << 18, 8))
    vectors = rng.standard_normal((8, 8))

    n = 8
    a = rng.standard_normal((n, n))
    a = (a + a.T) / 2
    b = rng.standard_normal((n, n))
    b = (b + b.T) / 2
    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    signs = np.array(list(product((-1.0, 1.0), repeat=n)))

    results = {"backend": _kernels.BACKEND}
    results["min_abs_dot (2^18 x 8)"] = _time(
        lambda: _kernels.min_abs_dot(points, vectors), repeats=5)
    results["simplex boxes (400^2)"] = _time(
        lambda: _kernels.simplex_integrand_boxes(400), repeats=3)
    results["signed-perm quad (8! x 2^8)"] = _time(
        lambda: _kernels.signed_perm_max_quad(a, b, perms, signs), repeats=3)

    lo, hi = _kernels.simplex_integrand_boxes(100)
    results["_box_checksum"] = [float(lo.sum()), float(hi.sum())]
    return results


def run_driver() -> int:
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    rows = {}
    for backend in ("numpy", "numba"):
        env = dict(os.environ, GAUSSMIN_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--worker"],
            env=env, cwd=root, capture_output=True, text=True)
        if proc.returncode != 0:
            print(f"{backend} worker failed:\n{proc.stderr}", file=sys.stderr)
            return 1
        rows[backend] = json.loads(proc.stdout)

    if rows["numpy"]["_box_checksum"] != rows["numba"]["_box_checksum"]:
        print("ERROR: backends disagree on interval box sums", file=sys.stderr)
        return 1

    names = [k for k in rows["numpy"] if not k.startswith("_") and k != "backend"]
    width = max(len(name) for name in names)
    print(f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  speedup")
    for name in names:
        t_np, t_nb = rows["numpy"][name], rows["numba"][name]
        print(f"{name:<{width}}  {t_np * 1e3:>8.2f}ms  {t_nb * 1e3:>8.2f}ms  "
              f"{t_np / t_nb:>6.2f}x")
    print("\ninterval box sums agree bitwise across backends")
    return 0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--worker", action="store_true",
                        help="time the backend selected by GAUSSMIN_BACKEND "
                             "and print JSON (used internally)")
    args = parser.parse_args()
    if args.worker:
        print(json.dumps(run_worker()))
        return 0
    return run_driver()


if __name__ == "__main__":
    raise SystemExit(main())
