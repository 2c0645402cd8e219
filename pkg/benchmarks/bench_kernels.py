#!/usr/bin/env python
"""Compare the numba and pure-numpy row-reduction kernels.

Times ``rref`` mod p on random matrices of several shapes and densities
with both kernels (results are checked to agree), then times one
end-to-end simple-head computation in a subprocess with and without
``LEKAC_DISABLE_NUMBA=1``.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --sizes 50 100 200 --p 7 --output bench.json
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from lekac import _kernels


def random_matrix(rng, rows, cols, p, density):
    a = rng.integers(0, p, size=(rows, cols), dtype=np.int64)
    a[rng.random((rows, cols)) > density] = 0
    return a


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kernels(sizes, p, densities, repeat, seed):
    rng = np.random.default_rng(seed)
    rows = []
    if _kernels.NUMBA_AVAILABLE:
        # compile outside the timed region
        _kernels._rref_numba(random_matrix(rng, 4, 4, p, 1.0), p)
    for n in sizes:
        for dens in densities:
            a = random_matrix(rng, n, n + n // 2, p, dens)
            ref = a.copy()
            piv_np = _kernels._rref_numpy(ref, p)
            t_np = best_of(lambda: _kernels._rref_numpy(a.copy(), p), repeat)
            row = {"rows": n, "cols": n + n // 2, "density": dens, "p": p, "rank": len(piv_np), "numpy_s": t_np}
            if _kernels.NUMBA_AVAILABLE:
                out = a.copy()
                piv_nb = _kernels._rref_numba(out, p)
                assert np.array_equal(out, ref) and np.array_equal(piv_nb, piv_np), "kernels disagree"
                row["numba_s"] = best_of(lambda: _kernels._rref_numba(a.copy(), p), repeat)
                row["speedup"] = t_np / row["numba_s"]
            rows.append(row)
    return rows


def bench_end_to_end(lam, n, p):
    out = {}
    for label, flag in [("numba", "0"), ("numpy", "1")]:
        env = dict(os.environ, LEKAC_DISABLE_NUMBA=flag)
        cmd = [sys.executable, "-m", "lekac", "simple-head", "--n", str(n), "--p", str(p), "--lambda", lam]
        t0 = time.perf_counter()
        subprocess.run(cmd, env=env, check=True, capture_output=True)
        out[label] = time.perf_counter() - t0
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--densities", type=float, nargs="+", default=[0.05, 0.5])
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--lambda", dest="lam", default="1,2|3")
    ap.add_argument("--skip-end-to-end", action="store_true")
    ap.add_argument("--output", default=None)
    args = ap.parse_args()

    rows = bench_kernels(args.sizes, args.p, args.densities, args.repeat, args.seed)
    print(f"{'shape':>12} {'dens':>5} {'rank':>5} {'numpy s':>9} {'numba s':>9} {'x':>6}")
    for r in rows:
        nb = r.get("numba_s")
        print(
            f"{r['rows']:>5}x{r['cols']:<6} {r['density']:>5.2f} {r['rank']:>5} {r['numpy_s']:>9.4f} "
            f"{nb if nb is None else f'{nb:9.4f}':>9} {r.get('speedup', float('nan')):>6.1f}"
        )
    report = {"kernels": rows}
    if not args.skip_end_to_end:
        e2e = bench_end_to_end(args.lam, 2, args.p)
        print(f"simple-head n=2 lambda={args.lam}: numba {e2e['numba']:.2f}s, numpy {e2e['numpy']:.2f}s")
        report["simple_head"] = e2e
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(report, fh, indent=1)


if __name__ == "__main__":
    main()
