"""Brute-force references: exhaustive Sym(n) and exhaustive Wr(C).

Nothing here touches the solver's search; only the object and wreath data
types are shared.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .cyclic import CyclicContext, context
from .enum_kernels import MAX_BITS, EdgeMatcher
from .errors import BudgetExceeded, NotCayley
from .objects import ColoredHypergraph, RelStruct, is_cayley
from .perm import Permutation
from .wreath import WreathElement, agl_elements, node_order, order as wr_order

CHUNK = 1 << 14


@dataclass(frozen=True)
class OracleBudget:
    max_sym_degree: int = 8
    max_group_order: int = 10**7


def _as_edges(obj) -> tuple[int, list]:
    """(ground size, [(color, {(point, slot)})]) for either object kind."""
    if isinstance(obj, RelStruct):
        edges = [(i + 1, frozenset((v, pos) for pos, v in enumerate(t, start=1)))
                 for i, rel in enumerate(obj.relations) for t in rel.tuples]
        return obj.n, edges
    if isinstance(obj, ColoredHypergraph):
        return obj.n, list(obj.edges)
    # a SolveInstance-like pair is handled by the caller
    raise TypeError(type(obj))


def _comparable(X, Y) -> bool:
    if X.n != Y.n or type(X) is not type(Y):
        return False
    if isinstance(X, RelStruct):
        return X.signature() == Y.signature()
    return X.copies == Y.copies


class _Checker:
    def __init__(self, n, x_edges, y_edges):
        self.n = n
        self.x_edges = x_edges
        self.y_set = frozenset(y_edges)
        slots = max([s for _, e in list(x_edges) + list(y_edges) for _, s in e], default=1)
        self.fast = EdgeMatcher(n, x_edges, y_edges) if n * slots <= MAX_BITS else None

    def exact(self, img) -> bool:
        return all((c, frozenset((int(img[v]), s) for v, s in e)) in self.y_set for c, e in self.x_edges)

    def match(self, perms: np.ndarray) -> np.ndarray:
        if len(self.x_edges) != len(self.y_set):
            return np.zeros(perms.shape[0], dtype=bool)
        if self.fast is not None:
            return self.fast.match(perms)
        return np.fromiter((self.exact(p) for p in perms), dtype=bool, count=perms.shape[0])


def _sym_chunks(n: int):
    it = itertools.permutations(range(n))
    while True:
        block = list(itertools.islice(it, CHUNK))
        if not block:
            return
        yield np.asarray(block, dtype=np.int64).reshape(len(block), n)


def brute_iso_sym(X, Y, budget: OracleBudget = OracleBudget()) -> list[Permutation]:
    """Every f in Sym(n) with X^f = Y, in lexicographic order."""
    if X.n > budget.max_sym_degree:
        raise BudgetExceeded(f"Sym({X.n}) exceeds max_sym_degree={budget.max_sym_degree}")
    if not _comparable(X, Y):
        return []
    n, xe = _as_edges(X)
    _, ye = _as_edges(Y)
    chk = _Checker(n, xe, ye)
    out = []
    for block in _sym_chunks(n):
        for row in block[chk.match(block)]:
            out.append(Permutation._trusted(tuple(int(v) for v in row)))
    return out


def wreath_images(ctx: CyclicContext, budget: OracleBudget = OracleBudget()):
    """Yield image matrices covering every element of Wr(C) exactly once."""
    total = wr_order(ctx)
    if total > budget.max_group_order:
        raise BudgetExceeded(f"|Wr(Z_{ctx.n})| = {total} exceeds {budget.max_group_order}")
    nodes = node_order(ctx)
    tables = [np.asarray(agl_elements(ctx.radices[j]), dtype=np.int64) for j, _ in nodes]
    radix = np.asarray([len(t) for t in tables], dtype=np.int64)
    offsets = np.cumsum([0] + [ctx.moduli[j] for j in range(ctx.d)])
    x = np.arange(ctx.n, dtype=np.int64)
    for lo in range(0, total, CHUNK):
        idx = np.arange(lo, min(total, lo + CHUNK), dtype=np.int64)
        choice = np.empty((idx.size, len(nodes)), dtype=np.int64)
        rem = idx.copy()
        for r in range(len(nodes)):
            choice[:, r] = rem % radix[r]
            rem //= radix[r]
        img = np.zeros((idx.size, ctx.n), dtype=np.int64)
        for j, q in enumerate(ctx.radices):
            M = ctx.moduli[j]
            t = (x // M) % q
            lab = np.stack([tables[r][choice[:, r]] for r in range(offsets[j], offsets[j + 1])], axis=1)
            a = lab[:, x % M, 0]
            b = lab[:, x % M, 1]
            img += ((a * t + b) % q) * M
        yield img


def enumerate_wreath(ctx, budget: OracleBudget = OracleBudget()) -> list[WreathElement]:
    from .wreath import from_perm

    return [from_perm(ctx, row) for block in wreath_images(ctx, budget) for row in block]


def _instance_edges(instance):
    return instance.ctx.n, list(instance.x_edges), list(instance.y_edges)


def brute_iso_wr(ctx: CyclicContext, X, Y=None, budget: OracleBudget = OracleBudget()) -> list[Permutation]:
    """Every g in Wr(C) solving the instance, as permutations in lexicographic order.

    ``X`` is either a solver instance (``Y`` omitted) or an object with ``Y``
    an object of the same kind.
    """
    if Y is None:
        n, xe, ye = _instance_edges(X)
    else:
        if not _comparable(X, Y):
            return []
        n, xe = _as_edges(X)
        _, ye = _as_edges(Y)
    if n != ctx.n:
        raise ValueError("context does not match the instance")
    chk = _Checker(n, xe, ye)
    out = []
    for block in wreath_images(ctx, budget):
        for row in block[chk.match(block)]:
            out.append(Permutation._trusted(tuple(int(v) for v in row)))
    out.sort()
    return out


def check_theorem_1(X, Y, budget: OracleBudget = OracleBudget(), require_cayley: bool = True) -> bool:
    """(some isomorphism in Sym(n)) iff (some isomorphism in Wr(C))."""
    if require_cayley:
        for name, obj in zip("XY", (X, Y)):
            ok, wit = is_cayley(obj)
            if not ok:
                raise NotCayley(f"{name} is not Cayley: {wit}", wit)
    if X.n != Y.n:
        return True
    sym_side = bool(brute_iso_sym(X, Y, budget))
    wr_side = bool(brute_iso_wr(context(X.n), X, Y, budget))
    return sym_side == wr_side


def first_iso(X, Y, budget: OracleBudget = OracleBudget()) -> tuple[int, Permutation | None]:
    isos = brute_iso_sym(X, Y, budget)
    return len(isos), (isos[0] if isos else None)
