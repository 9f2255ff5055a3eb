"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--repeat 5] [--groups S5 A5 "GL(2,3)" S6]
"""
import argparse
import timeit

import numpy as np

from fusionlab._kernels import numba_kernels, numpy_kernels
from fusionlab.harness.corpus import builtin_corpus
from fusionlab.permcore import Permutation, group_closure

EXTRA = {"S6": (6, ["(1 2)", "(1 2 3 4 5 6)"])}


def load(name):
    if name in EXTRA:
        degree, gens = EXTRA[name]
        return group_closure([Permutation.from_cycles(g, degree) for g in gens], degree, cap=None)
    entry = next(e for e in builtin_corpus() if e.name == name)
    return entry.build(cap=None)


def workloads(G, k):
    table = k.multiplication_table(G.images)
    e = G.identity_index
    inv = k.inverses(table, e)
    conj = k.conjugation_table(table, inv)
    rng = np.random.default_rng(0)
    gens = rng.choice(G.order, size=2, replace=False).astype(np.int32)
    sub = k.closure(table, gens[:1], e)
    members = np.flatnonzero(sub).astype(np.int32)
    return {
        "multiplication_table": lambda: k.multiplication_table(G.images),
        "conjugation_table": lambda: k.conjugation_table(table, inv),
        "closure": lambda: k.closure(table, gens, e),
        "element_orders": lambda: k.element_orders(table, e),
        "transporter": lambda: k.transporter(conj, members, sub),
        "centralizing": lambda: k.centralizing(table, members),
    }


def best(fn, repeat):
    fn()  # warmup, also triggers JIT compilation
    number, _ = timeit.Timer(fn).autorange()
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--groups", nargs="+", default=["S5", "A5", "GL(2,3)", "S6"])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if numba_kernels is None:
        print("numba is not available; only the numpy path can be timed")
    print(f"{'group':<8} {'order':>5} {'kernel':<22} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for name in args.groups:
        G = load(name)
        np_work = workloads(G, numpy_kernels)
        nb_work = workloads(G, numba_kernels) if numba_kernels is not None else {}
        for kernel, fn in np_work.items():
            t_np = best(fn, args.repeat) * 1e3
            if kernel in nb_work:
                t_nb = best(nb_work[kernel], args.repeat) * 1e3
                print(f"{name:<8} {G.order:>5} {kernel:<22} {t_np:>10.3f} {t_nb:>10.3f} {t_np / t_nb:>7.1f}x")
            else:
                print(f"{name:<8} {G.order:>5} {kernel:<22} {t_np:>10.3f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
