"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--scale 1.0]

Each workload runs once untimed per backend so numba compilation is excluded
(its cost is reported separately), then the best of ``--repeat`` runs is shown.
"""

from __future__ import annotations

import argparse
import itertools
import time

import numpy as np

from lawvere import builtin_clone, kernels
from lawvere.clone import check_clone_laws
from lawvere.fpcat import FinSetCategory
from lawvere.semantics import enumerate_algebras
from lawvere.terms import App, Signature, TableLayout, Var


def union_find(scale, rng):
    n = int(200_000 * scale)
    left, right = rng.integers(0, n, size=(2, n))

    def run(impl):
        uf = kernels.UnionFind(n, impl)
        uf.union_edges(left, right)
        return uf.labels()

    return run


def eval_program(scale, rng):
    sig = Signature([("m", 2), ("u", 1)])
    q = 3
    layout = TableLayout(sig, q)
    t = Var(0)
    for i in range(12):
        t = App("m", (App("u", (t,)), Var(i % 3)))
    rows = rng.integers(0, q, size=(int(20_000 * scale), layout.width))
    return lambda impl: layout.evaluate(t, rows, 3, impl)


def hom_filter(scale, rng):
    q = 6
    maps = np.array(list(itertools.product(range(q), repeat=q)))
    src = rng.integers(0, q, size=q ** 2)
    dst = rng.integers(0, q, size=q ** 2)
    reps = max(1, int(4 * scale))
    return lambda impl: [kernels.hom_filter(maps, src, dst, q, q, 2, impl) for _ in range(reps)]


def assoc(scale, rng):
    # projection clone: superposition selects a coordinate, so nothing mismatches
    j = k = n = 3
    s = 3
    codes = list(itertools.product(range(s), repeat=j))
    sup = np.array([[c[h] for c in codes] for h in range(s)])
    reps = max(1, int(2000 * scale))
    return lambda impl: [kernels.assoc_mismatch(sup, sup, sup, s, s, j, impl) for _ in range(reps)]


def algebras(scale, rng):
    T = builtin_clone("bounded-semilattice")
    C = FinSetCategory(4, 64)
    return lambda impl: enumerate_algebras(T, C, 3, impl=impl)


def clone_laws(scale, rng):
    T = builtin_clone("semilattice")
    return lambda impl: check_clone_laws(T, 3, impl=impl)


WORKLOADS = {
    "union-find": union_find,
    "eval-program": eval_program,
    "hom-filter": hom_filter,
    "assoc-mismatch": assoc,
    "enumerate-algebras": algebras,
    "clone-laws": clone_laws,
}


def best_of(fn, impl, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(impl)
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--scale", type=float, default=1.0, help="multiply workload sizes")
    ap.add_argument("--only", choices=sorted(WORKLOADS), action="append")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = ["numpy"] + (["numba"] if kernels.NUMBA_KERNELS is not None else [])
    if len(backends) == 1:
        print("numba is not installed; timing the numpy fallback only")
    print(f"{'workload':<20}" + "".join(f"{b:>12}" for b in backends) + ("   speedup  compile" if len(backends) > 1 else ""))
    for name in args.only or WORKLOADS:
        fn = WORKLOADS[name](args.scale, np.random.default_rng(args.seed))
        row, compile_cost = [], 0.0
        for b in backends:
            t0 = time.perf_counter()
            fn(b)
            first = time.perf_counter() - t0
            best = best_of(fn, b, args.repeat)
            if b == "numba":
                compile_cost = max(first - best, 0.0)
            row.append(best)
        line = f"{name:<20}" + "".join(f"{t * 1e3:>10.2f}ms" for t in row)
        if len(row) > 1:
            line += f"{row[0] / row[1]:>9.1f}x{compile_cost:>8.2f}s"
        print(line)


if __name__ == "__main__":
    main()
