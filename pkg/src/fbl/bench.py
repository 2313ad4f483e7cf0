"""Benchmark the numba kernels against the pure-numpy fallback.

Usage: python -m fbl.bench [--samples N] [--dim D] [--tuples B] [--k K]

Times the two hot kernels (batch generator evaluation and the batched
sign-cube constraint) under both backends in a single process, plus one full
norm search through whichever backend is active (see FBL_BACKEND).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import kernels
from .fblnorm import SearchConfig, fbl_lower_bound
from .homfun import BuiltinF, LiftParams
from .spaces import Space


def _time(fn, repeats=5):
    fn()  # warm-up (includes JIT compilation for the numba path)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=200_000)
    ap.add_argument("--dim", type=int, default=8)
    ap.add_argument("--tuples", type=int, default=20_000)
    ap.add_argument("--k", type=int, default=4)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    params = LiftParams()
    Mv, Nv = params.arrays(args.dim)
    X = rng.standard_normal((args.samples, args.dim))
    XB = rng.standard_normal((args.tuples, args.k, args.dim))
    S = kernels.sign_patterns(args.k)

    rows = []
    impls = {"numpy": (kernels._hom_batch_numpy, kernels._constraint_batch_numpy)}
    if kernels.BACKEND == "numba":
        impls["numba"] = (kernels._hom_batch_numba, kernels._constraint_batch_numba)
    else:
        print("numba backend unavailable (FBL_BACKEND=numpy or numba missing); "
              "benchmarking numpy only")

    for name, (hom, cons) in impls.items():
        t_hom = _time(lambda: hom(X, 2, args.dim, Mv, Nv))
        t_cons = _time(lambda: cons(XB, S, 2.0))
        rows.append((name, t_hom, t_cons))

    print(f"{'backend':<8} {'hom_batch':>12} {'constraint':>12}")
    for name, t_hom, t_cons in rows:
        print(f"{name:<8} {t_hom * 1e3:>10.2f}ms {t_cons * 1e3:>10.2f}ms")
    if len(rows) == 2:
        print(f"speedup  {rows[0][1] / rows[1][1]:>10.2f}x {rows[0][2] / rows[1][2]:>10.2f}x")

    space = Space.lp(2.0, args.dim)
    t0 = time.perf_counter()
    est = fbl_lower_bound(BuiltinF(1, params), space, SearchConfig(k=3, restarts=50))
    t1 = time.perf_counter() - t0
    print(f"full search ({kernels.BACKEND} backend): {t1:.3f}s, "
          f"lower bound {est.lower_bound:.6f}")


if __name__ == "__main__":
    main()
