"""Compiled versus pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row times one kernel on identical inputs under both backends and
reports the speedup. Rows are skipped for the compiled column when the
extension is not built.
"""

from __future__ import annotations

import argparse
import random
import timeit

import numpy as np

from reggraph import kernels
from reggraph.catalog import disjoint_triples
from reggraph.edgematrix import canonical_system, implied_zero
from reggraph.graph import random_regression_graph


def _rows(rng, n, density=0.3):
    return [sum(1 << j for j in range(n) if rng.random() < density) | (1 << i) for i in range(n)]


def _cases(seed=0):
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    rows = _rows(rng, 40)
    over = sum(1 << j for j in range(0, 40, 2))
    graphs = [random_regression_graph(8, nrng) for _ in range(10)]
    queries = [(g, list(a), list(b), list(c)) for g in graphs
               for a, b, c in list(disjoint_triples(range(g.n)))[::97]]
    cs = canonical_system(graphs[0])
    width = len(cs.rows)
    amask = sum(1 << j for j in range(min(3, width)))
    bmask = sum(1 << j for j in range(3, min(6, width)))
    grid = [0.25, 0.5, 0.75]
    return {
        "closure (40 nodes)": lambda: kernels.closure(rows, over),
        "matmul (40 x 40)": lambda: kernels.matmul(rows, rows),
        "induced_rows (canonical DAG)":
            lambda: kernels.induced_rows(cs.rows, list(range(width)), amask, bmask),
        f"implied_zero ({len(queries)} queries)":
            lambda: [implied_zero(g, a, b, c) for g, a, b, c in queries],
        "binary grid scan (3^7 tables)":
            lambda: kernels.binary_grid_scan(grid, ("s", "i", "k"), 1e-12),
    }


def _time(fn, repeat):
    number = max(1, int(0.05 / max(timeit.timeit(fn, number=1), 1e-7)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    backends = kernels.available_backends()
    print(f"{'kernel':38} {'python':>12} {'compiled':>12} {'speedup':>8}")
    for name, fn in _cases().items():
        t = {}
        for b in backends:
            kernels.use_backend(b)
            t[b] = _time(fn, args.repeat)
        kernels.use_backend(None)
        comp = t.get("compiled")
        comp_s = f"{comp * 1e6:10.1f}us" if comp else f"{'n/a':>12}"
        speed = f"{t['python'] / comp:7.1f}x" if comp else f"{'':>8}"
        print(f"{name:38} {t['python'] * 1e6:10.1f}us {comp_s} {speed}")


if __name__ == "__main__":
    main()
