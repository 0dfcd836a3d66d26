"""Compare the numba and pure-numpy kernels.

Times the refinement kernel, the oracle edge matcher and the end-to-end
solver on random circulant instances, and prints the speed-up per size.

    python3 benchmarks/bench_backends.py --n-max 128 --seed 0
"""

import argparse
import statistics
import time

import numpy as np

from circiso import _backend, bench, refine_kernels
from circiso.cyclic import context
from circiso.encode import encode
from circiso.enum_kernels import EdgeMatcher
from circiso.objects import random_cayley
from circiso.oracle import wreath_images
from circiso.solver import _Side


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def refine_case(n, seed):
    X = random_cayley(n, "hypergraph", edge_sizes=(2, 3), orbits=2, seed=seed)
    s = _Side(X.edges, n)
    px = np.zeros(n, dtype=np.int64)
    px[0] = 1
    args = (s.inc_e, s.inc_p, s.inc_c, s.ecol, s.inc_e, s.inc_p, s.inc_c, s.ecol, s.n_edges)
    return lambda: refine_kernels.refine(*args, px.copy(), px.copy())


def matcher_case(n, seed):
    X = random_cayley(n, "relstruct", arities=(2,), orbits=2, seed=seed)
    H = encode(X).hypergraph
    m = EdgeMatcher(n, list(H.edges), list(H.edges))
    block = next(wreath_images(context(n)))
    return lambda: m.match(block)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=128)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--csv", help="also write end-to-end solver timings here")
    args = ap.parse_args()

    print(f"{'kernel':<10}{'n':>6}{'numba s':>12}{'numpy s':>12}{'speed-up':>10}")
    cases = [("refine", refine_case, bench.sizes_up_to(args.n_max)),
             ("match", matcher_case, [4, 8, 12, 16])]
    for name, make, sizes in cases:
        for n in sizes:
            fn = make(n, args.seed)
            res = {}
            for backend in ("numba", "numpy"):
                _backend.set_backend(backend)
                fn()  # compile / warm caches
                res[backend] = best_of(fn, args.repeat)
            print(f"{name:<10}{n:>6}{res['numba']:>12.5f}{res['numpy']:>12.5f}"
                  f"{res['numpy'] / res['numba']:>10.1f}")

    rows = bench.run(bench.sizes_up_to(args.n_max), trials=3, seed=args.seed)
    print()
    print(f"{'solver':<10}{'n':>6}{'numba s':>12}{'numpy s':>12}{'speed-up':>10}")
    for n in sorted({r.n for r in rows}):
        med = {b: statistics.median(r.seconds for r in rows if r.n == n and r.backend == b)
               for b in ("numba", "numpy")}
        print(f"{'iso':<10}{n:>6}{med['numba']:>12.5f}{med['numpy']:>12.5f}{med['numpy'] / med['numba']:>10.1f}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(bench.to_csv(rows))


if __name__ == "__main__":
    main()
