"""Time the numba kernels against their numpy/Python fallbacks.

Both implementations run in one process on the same random instances, and
their outputs are compared before any timing is reported.

    python3 benchmarks/bench_kernels.py --sizes 10 14 16 --repeat 3
"""
from __future__ import annotations

import argparse
import random
import time

import numpy as np

from pohpp import _kernels
from pohpp.generate import random_instance, random_tree_plus_edges
from pohpp.oracle import _arrays


def _best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def bench_completion_table(sizes, repeat, rng):
    rows = []
    for n in sizes:
        inst = random_instance(rng, n, 0.5, d=n // 2, objective="min")
        adj, pred, weight = _arrays(inst)
        ref = _kernels.completion_table_numpy(adj, pred, weight, -1)
        row = {"kernel": "completion_table", "n": n, "numpy_s": _best_of(
            lambda: _kernels.completion_table_numpy(adj, pred, weight, -1), repeat)}
        if _kernels.HAS_NUMBA:
            _kernels._completion_table_jit(adj, pred, weight, np.int64(-1))  # compile
            out = _kernels._completion_table_jit(adj, pred, weight, np.int64(-1))
            assert np.array_equal(out, ref), "numba and numpy tables differ"
            row["numba_s"] = _best_of(lambda: _kernels._completion_table_jit(adj, pred, weight, np.int64(-1)), repeat)
        rows.append(row)
    return rows


def bench_simple_paths(sizes, repeat, rng):
    rows = []
    for n in sizes:
        g = random_tree_plus_edges(rng, n, 4)
        adj = np.array(g.adj, dtype=np.int64)
        ref = _kernels.count_simple_paths_py(adj)
        row = {"kernel": "count_simple_paths", "n": n, "numpy_s": _best_of(
            lambda: _kernels.count_simple_paths_py(adj), repeat)}
        if _kernels.HAS_NUMBA:
            assert int(_kernels._count_simple_paths_jit(adj)) == ref, "path counts differ"
            row["numba_s"] = _best_of(lambda: _kernels._count_simple_paths_jit(adj), repeat)
        rows.append(row)
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 12, 14, 16])
    ap.add_argument("--path-sizes", type=int, nargs="+", default=[20, 40, 60])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    rows = bench_completion_table(args.sizes, args.repeat, rng)
    rows += bench_simple_paths(args.path_sizes, args.repeat, rng)
    if not _kernels.HAS_NUMBA:
        print("numba unavailable or disabled; timing the fallback only")
    print(f"{'kernel':<20}{'n':>5}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for r in rows:
        nb = r.get("numba_s")
        speed = f"{r['numpy_s'] / nb:>9.1f}x" if nb else f"{'-':>10}"
        nb_txt = f"{nb:>12.4f}" if nb else f"{'-':>12}"
        print(f"{r['kernel']:<20}{r['n']:>5}{r['numpy_s']:>12.4f}{nb_txt}{speed}")
    return rows


if __name__ == "__main__":
    main()
