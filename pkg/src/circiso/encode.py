"""Relational structure -> edge-colored hypergraph on m copies of Z_n.

For X with relations R_1..R_k of maximal arity m the hypergraph H(X) has

* one edge per copy i (all of copy i), color i;
* for each tuple (a, b, ...) of R_i the edge {a:1, b:2, ...}, color m + i;
* for each point a the diagonal edge {a:1, ..., a:m}, color m + k + 1.

A permutation f of Z_n lifts to ``hat(f)``, acting diagonally on the copies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .errors import UniverseTooLarge
from .objects import ColoredHypergraph, Relation, RelStruct, apply
from .perm import Permutation


@dataclass(frozen=True)
class EncodedInstance:
    hypergraph: ColoredHypergraph
    n: int
    m: int
    k: int
    arities: tuple[int, ...]

    @property
    def copy_colors(self) -> range:
        return range(1, self.m + 1)

    @property
    def diagonal_color(self) -> int:
        return self.m + self.k + 1


def encode(X: RelStruct) -> EncodedInstance:
    n, m, k = X.n, X.max_arity, X.k
    edges = [(i, frozenset((v, i) for v in range(n))) for i in range(1, m + 1)]
    for i, rel in enumerate(X.relations, start=1):
        for t in rel.tuples:
            edges.append((m + i, frozenset((v, pos) for pos, v in enumerate(t, start=1))))
    edges += [(m + k + 1, frozenset((a, c) for c in range(1, m + 1))) for a in range(n)]
    H = ColoredHypergraph(n, m, tuple(edges))
    return EncodedInstance(H, n, m, k, tuple(r.arity for r in X.relations))


def decode(inst: EncodedInstance) -> RelStruct:
    """Read the relations back from the E_2 edges."""
    rels: list[list[tuple]] = [[] for _ in range(inst.k)]
    for color, e in inst.hypergraph.edges:
        i = color - inst.m
        if 1 <= i <= inst.k:
            by_pos = dict((c, v) for v, c in e)
            rels[i - 1].append(tuple(by_pos[p] for p in range(1, inst.arities[i - 1] + 1)))
    return RelStruct(inst.n, tuple(Relation(a, tuple(ts)) for a, ts in zip(inst.arities, rels)))


def hat(f: Permutation, m: int) -> Permutation:
    """Diagonal lift; vertex (v, c) is flattened to (c - 1) * n + v."""
    n = f.degree
    return Permutation._trusted(tuple((c * n) + f.images[v] for c in range(m) for v in range(n)))


def unhat(F: Permutation, n: int) -> Permutation | None:
    if F.degree % n:
        return None
    m = F.degree // n
    base = F.images[:n]
    if sorted(base) != list(range(n)):
        return None
    for c in range(m):
        if any(F.images[c * n + v] != c * n + base[v] for v in range(n)):
            return None
    return Permutation._trusted(tuple(base))


def _flat_edges(H: ColoredHypergraph) -> frozenset:
    n = H.n
    return frozenset((col, frozenset((c - 1) * n + v for v, c in e)) for col, e in H.edges)


def _is_hyper_iso(F: Permutation, ex: frozenset, ey: frozenset) -> bool:
    img = F.images
    return all((col, frozenset(img[v] for v in e)) in ey for col, e in ex)


def hat_lemma_check(X: RelStruct, Y: RelStruct, universe: str | Iterable[Permutation] = "auto",
                    max_sym_points: int = 8) -> bool:
    """Check Iso(H(X), H(Y)) == {hat(f) : f in Iso(X, Y)} over a universe of candidates.

    ``universe`` is ``"sym"`` (all of Sym(Omega)), ``"wr"`` (hats of Wr(Z_n)),
    ``"auto"`` (sym when |Omega| <= max_sym_points, else wr) or an iterable of
    permutations of Omega.
    """
    from . import wreath
    from .cyclic import context

    HX, HY = encode(X), encode(Y)
    if HX.m != HY.m or X.n != Y.n:
        # different vertex sets: both sides are empty
        return True
    n, m = X.n, HX.m
    omega = n * m
    if universe == "auto":
        universe = "sym" if omega <= max_sym_points else "wr"
    if universe == "sym":
        if omega > max_sym_points:
            raise UniverseTooLarge(f"|Omega| = {omega} exceeds {max_sym_points}")
        candidates = (Permutation._trusted(p) for p in itertools.permutations(range(omega)))
    elif universe == "wr":
        ctx = context(n)
        if wreath.order(ctx) > 10**6:
            raise UniverseTooLarge(f"Wr(Z_{n}) has order {wreath.order(ctx)}")
        candidates = (hat(g.to_perm(), m) for g in _all_wreath(ctx))
    else:
        candidates = iter(universe)
    ex, ey = _flat_edges(HX.hypergraph), _flat_edges(HY.hypergraph)
    ex_ok = len(ex) == len(ey)
    for F in candidates:
        lhs = ex_ok and _is_hyper_iso(F, ex, ey)
        f = unhat(F, n)
        rhs = f is not None and apply(X, f) == Y
        if lhs != rhs:
            return False
    return True


def _all_wreath(ctx):
    from .wreath import WreathElement, agl_elements, node_order

    nodes = node_order(ctx)
    choices = [agl_elements(ctx.radices[j]) for j, _ in nodes]
    for combo in itertools.product(*choices):
        yield WreathElement.from_labels(ctx, dict(zip(nodes, combo)))
