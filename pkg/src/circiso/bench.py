"""Timing harness shared by ``circiso bench`` and ``benchmarks/``."""

from __future__ import annotations

import csv
import io
import time
import warnings
from dataclasses import dataclass

from . import _backend
from .cyclic import context
from .objects import apply, random_cayley
from .solver import iso
from .wreath import sample_uniform

DEFAULT_SIZES = (32, 64, 128, 255)


@dataclass
class BenchRow:
    n: int
    kind: str
    backend: str
    trial: int
    edges: int
    seconds: float
    verdict: str


def instance(n: int, kind: str, seed: int):
    """A random circulant object with at most 4n edges and a Wr(C)-image of it."""
    if kind == "relstruct":
        X = random_cayley(n, "relstruct", arities=(2, 2), orbits=2, seed=seed)
    else:
        X = random_cayley(n, "hypergraph", edge_sizes=(3, 4), orbits=2, seed=seed)
    f = sample_uniform(context(n), seed + 1).to_perm()
    return X, apply(X, f)


def sizes_up_to(n_max: int) -> list[int]:
    out = [n for n in DEFAULT_SIZES if n <= n_max]
    return out or [n_max]


def run(sizes, kinds=("relstruct", "hypergraph"), backends=("numba", "numpy"),
        trials: int = 3, seed: int = 0) -> list[BenchRow]:
    rows = []
    before = _backend.get_backend()
    try:
        for backend in backends:
            _backend.set_backend(backend)
            # warm-up so compilation is not timed
            W = random_cayley(4, "relstruct", orbits=1, seed=0)
            iso(W, W)
            for n in sizes:
                for kind in kinds:
                    for t in range(trials):
                        X, Y = instance(n, kind, seed + 1000 * t + n)
                        with warnings.catch_warnings():
                            # Y is a Wr(C)-image of X and usually not circulant
                            warnings.simplefilter("ignore")
                            t0 = time.perf_counter()
                            res = iso(X, Y, allow_non_cayley=True)
                            dt = time.perf_counter() - t0
                        n_edges = sum(len(r) for r in X.relations) if kind == "relstruct" else len(X.edges)
                        rows.append(BenchRow(n, kind, backend, t, n_edges, dt, res.verdict))
    finally:
        _backend.set_backend(before)
    return rows


def to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "kind", "backend", "trial", "edges", "seconds", "verdict"])
    for r in rows:
        w.writerow([r.n, r.kind, r.backend, r.trial, r.edges, f"{r.seconds:.6f}", r.verdict])
    return buf.getvalue()
