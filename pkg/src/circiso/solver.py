"""Hypergraph isomorphism inside the coset of Wr(C), acting diagonally on copies.

The search walks the label tree of Wr(C) in breadth-first node order. After
the labels of nodes ``0..r-1`` are fixed, every X-point has a known image
block, and the joint color refinement of X and Y (seeded with those blocks)
either separates the two sides or yields colors that exclude most labels at
node ``r``.

Automorphisms are collected first, node by node from the last one up, into a
``NodeChain``: the labels that ``Aut & K_r`` shows at node ``r`` form a
subgroup ``H_r`` of AGL(1, q). Left multiplication by ``Aut & K_r`` permutes
the labels at node ``r`` within the classes ``{h then mu : h in H_r}``, so a
single label per class needs exploring, both when collecting automorphisms at
deeper nodes and when looking for one isomorphism. The answer is the coset
``Aut * g0``.
"""

from __future__ import annotations

import logging
import math
import sys
import time
import warnings
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import refine_kernels
from .cyclic import CyclicContext, context, euler_phi
from .encode import encode
from .errors import (BranchLimitExceeded, InputError, NotApplicable, NotCayley,
                     TimeLimitExceeded)
from .objects import ColoredHypergraph, RelStruct, apply as apply_object, is_cayley
from .perm import Permutation
from .wreath import (AglLabel, Coset, NodeChain, WreathElement, agl_elements,
                     apply_labels, node_order)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveOptions:
    time_limit: float | None = None
    branch_limit: int | None = None
    parallel: bool = False


@dataclass
class SolveInstance:
    ctx: CyclicContext
    copies: int
    x_edges: tuple
    y_edges: tuple
    options: SolveOptions = field(default_factory=SolveOptions)

    def __post_init__(self):
        self.x_edges = _dedupe(self.x_edges)
        self.y_edges = _dedupe(self.y_edges)
        for edges in (self.x_edges, self.y_edges):
            for col, e in edges:
                for v, c in e:
                    if not 0 <= v < self.ctx.n or not 1 <= c <= self.copies:
                        raise InputError(f"vertex {v}:{c} out of range")

    @classmethod
    def from_hypergraphs(cls, X: ColoredHypergraph, Y: ColoredHypergraph,
                         options: SolveOptions | None = None) -> "SolveInstance":
        if X.n != Y.n or X.copies != Y.copies:
            raise InputError("hypergraphs live on different vertex sets")
        return cls(context(X.n), X.copies, X.edges, Y.edges, options or SolveOptions())


def _dedupe(edges) -> tuple:
    seen = set()
    out = []
    for col, e in edges:
        key = (int(col), frozenset(e))
        if key not in seen:
            seen.add(key)
            out.append(key)
    out.sort(key=lambda ce: (ce[0], len(ce[1]), sorted(ce[1])))
    return tuple(out)


# --- traces ---------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    trace: frozenset
    color: int
    edge_ids: tuple[int, ...]


@dataclass(frozen=True)
class TraceTable:
    depth: int
    node: int
    entries: tuple[TraceEntry, ...]


def trace_table(ctx: CyclicContext, edges, depth: int, node: int) -> TraceTable:
    """Distinct nonempty traces ``e & (B x copies)`` on the block of a tree node."""
    M = ctx.moduli[depth]
    found: dict = {}
    for eid, (col, e) in enumerate(edges):
        tr = frozenset((v, c) for v, c in e if v % M == node)
        if tr:
            found.setdefault((tr, col), []).append(eid)
    entries = tuple(TraceEntry(tr, col, tuple(ids))
                    for (tr, col), ids in sorted(found.items(), key=lambda kv: (kv[0][1], sorted(kv[0][0]))))
    return TraceTable(depth, node, entries)


# --- search ---------------------------------------------------------------


class _Side:
    """Flat incidence arrays plus an exact edge set."""

    def __init__(self, edges, n: int):
        self.edges = edges
        self.edge_set = frozenset(edges)
        inc_e, inc_p, inc_c = [], [], []
        for eid, (_, e) in enumerate(edges):
            for v, c in sorted(e):
                inc_e.append(eid)
                inc_p.append(v)
                inc_c.append(c)
        self.inc_e = np.asarray(inc_e, dtype=np.int64)
        self.inc_p = np.asarray(inc_p, dtype=np.int64)
        self.inc_c = np.asarray(inc_c, dtype=np.int64)
        self.ecol = np.asarray([col for col, _ in edges], dtype=np.int64)
        self.n_edges = len(edges)

    def maps_onto(self, img, other: "_Side") -> bool:
        target = other.edge_set
        return all((col, frozenset((int(img[v]), c) for v, c in e)) in target for col, e in self.edges)


@lru_cache(maxsize=None)
def _agl_table(q: int):
    labels = agl_elements(q)
    i = np.arange(q)
    table = np.array([(a * i + b) % q for a, b in labels], dtype=np.int64)
    return labels, table


class _Search:
    def __init__(self, ctx: CyclicContext, X: _Side, Y: _Side, chain: NodeChain,
                 options: SolveOptions, counter: dict):
        self.ctx = ctx
        self.X, self.Y = X, Y
        self.chain = chain
        self.opts = options
        self.counter = counter
        self.nodes = node_order(ctx)
        self.N = len(self.nodes)
        self.A = [np.ones(m, dtype=np.int64) for m in ctx.moduli[:-1]]
        self.B = [np.zeros(m, dtype=np.int64) for m in ctx.moduli[:-1]]
        self.pts = np.arange(ctx.n, dtype=np.int64)

    def clone(self) -> "_Search":
        other = _Search(self.ctx, self.X, self.Y, self.chain, self.opts, self.counter)
        other.A = [a.copy() for a in self.A]
        other.B = [b.copy() for b in self.B]
        return other

    def _tick(self, r: int) -> None:
        c = self.counter
        c["nodes"] += 1
        lim = self.opts.branch_limit
        if lim is not None and c["nodes"] > lim:
            raise BranchLimitExceeded(f"branch limit {lim} exceeded",
                                      progress={"nodes": c["nodes"], "phase": c["phase"], "tree_node": r})
        tl = self.opts.time_limit
        if tl is not None and c["nodes"] % 32 == 0 and time.monotonic() - c["start"] > tl:
            raise TimeLimitExceeded(f"time limit {tl}s exceeded",
                                    progress={"nodes": c["nodes"], "phase": c["phase"], "tree_node": r})

    def assign(self, r: int, lab) -> None:
        j, s = self.nodes[r]
        self.A[j][s], self.B[j][s] = lab

    def clear(self, r: int) -> None:
        j, s = self.nodes[r]
        self.A[j][s], self.B[j][s] = 1, 0

    def state(self, r: int):
        """Refined colors for the state where nodes ``< r`` are fixed."""
        ctx = self.ctx
        pts = self.pts
        ximg = apply_labels(ctx, self.A, self.B, pts)
        if r >= self.N:
            px, py = ximg, pts.copy()
        else:
            j, s = self.nodes[r]
            M, M1 = ctx.moduli[j], ctx.moduli[j + 1]
            px = np.where(pts % M < s, M + ximg % M1, ximg % M)
            pre_inv = np.empty(M, dtype=np.int64)
            pre_inv[ximg[:M] % M] = np.arange(M)
            ypre = pts % M
            py = np.where(pre_inv[ypre] < s, M + pts % M1, ypre)
        X, Y = self.X, self.Y
        ok, cx, cy = refine_kernels.refine(X.inc_e, X.inc_p, X.inc_c, X.ecol,
                                           Y.inc_e, Y.inc_p, Y.inc_c, Y.ecol,
                                           X.n_edges, px, py)
        return ok, cx, cy, ximg

    def candidates(self, r: int, cx, cy, ximg) -> list:
        ctx = self.ctx
        j, s = self.nodes[r]
        q, M, M1 = ctx.radices[j], ctx.moduli[j], ctx.moduli[j + 1]
        labels, table = _agl_table(q)
        hx = refine_kernels.color_hash(cx)
        hy = refine_kernels.color_hash(cy)
        rest = np.arange(ctx.n // M1) * M1
        child = np.arange(q) * M
        t = int(ximg[s]) % M
        with np.errstate(over="ignore"):
            sig_x = hx[s + child[:, None] + rest[None, :]].sum(axis=1)
            sig_y = hy[t + child[:, None] + rest[None, :]].sum(axis=1)
        ok = (sig_y[table] == sig_x[None, :]).all(axis=1)
        return [labels[i] for i in np.nonzero(ok)[0]]

    def class_key(self, r: int, lab) -> tuple:
        q = self.ctx.radices[self.nodes[r][0]]
        mu = AglLabel(q, *lab)
        return min(tuple(AglLabel(q, *h).then(mu)[1:]) for h in self.chain.levels[r])

    def element(self) -> WreathElement:
        return WreathElement(self.ctx, [a.copy() for a in self.A], [b.copy() for b in self.B])

    def dfs(self, r: int):
        self._tick(r)
        ok, cx, cy, ximg = self.state(r)
        if not ok:
            return None
        if r == self.N:
            if self.X.maps_onto(ximg, self.Y):
                return self.element()
            return None
        return self._branch(r, self.candidates(r, cx, cy, ximg))

    def _branch(self, r: int, cands):
        tried = set()
        for lab in cands:
            key = self.class_key(r, lab)
            if key in tried:
                continue
            tried.add(key)
            self.assign(r, lab)
            g = self.dfs(r + 1)
            self.clear(r)
            if g is not None:
                return g
        return None

    def try_identity_completion(self):
        ximg = apply_labels(self.ctx, self.A, self.B, self.pts)
        if self.X.maps_onto(ximg, self.Y):
            return self.element()
        return None


def _double_coset(q: int, lab, H) -> set:
    mu = AglLabel(q, *lab)
    hs = [AglLabel(q, *h) for h in H]
    return {tuple(h1.then(mu).then(h2)[1:]) for h1 in hs for h2 in hs}


def _automorphisms(ctx, X: _Side, options, counter) -> NodeChain:
    chain = NodeChain.trivial(ctx)
    search = _Search(ctx, X, X, chain, options, counter)
    for r in reversed(range(search.N)):
        j, s = search.nodes[r]
        q = ctx.radices[j]
        ok, cx, cy, ximg = search.state(r)
        assert ok
        cands = search.candidates(r, cx, cy, ximg)
        failed: list = []
        dead: set = set()
        for lab in cands:
            if lab in chain.levels[r] or lab in dead:
                continue
            search.assign(r, lab)
            g = search.try_identity_completion()
            if g is None:
                g = search.dfs(r + 1)
            search.clear(r)
            if g is None:
                failed.append(lab)
                dead |= _double_coset(q, lab, chain.levels[r])
            else:
                chain.extend(r, g)
                dead = set()
                for f in failed:
                    dead |= _double_coset(q, f, chain.levels[r])
    return chain


def _edge_profile(edges) -> Counter:
    return Counter((col, len(e)) for col, e in edges)


def _split_full(edges, n: int, copies: int):
    """Separate edges that are unions of whole copies (fixed by every lift)."""
    full, rest = [], []
    for col, e in edges:
        cs = {c for _, c in e}
        if len(e) == n * len(cs) and e:
            full.append((col, frozenset(cs)))
        else:
            rest.append((col, e))
    return Counter(full), tuple(rest)


def iso_coset(instance: SolveInstance) -> Coset:
    """All g in Wr(C) whose diagonal lift maps every X-edge onto a same-colored Y-edge."""
    ctx = instance.ctx
    opts = instance.options
    if _edge_profile(instance.x_edges) != _edge_profile(instance.y_edges):
        return Coset.empty(ctx)
    full_x, xe = _split_full(instance.x_edges, ctx.n, instance.copies)
    full_y, ye = _split_full(instance.y_edges, ctx.n, instance.copies)
    if full_x != full_y:
        return Coset.empty(ctx)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * ctx.node_count + 200))
    X, Y = _Side(xe, ctx.n), _Side(ye, ctx.n)
    counter = {"nodes": 0, "start": time.monotonic(), "phase": "automorphisms"}
    chain = _automorphisms(ctx, X, opts, counter)
    for g in chain.generators:
        if not X.maps_onto(g.images(), X):
            raise AssertionError("automorphism generator failed verification")
    counter["phase"] = "isomorphism"
    if X.edge_set == Y.edge_set:
        rep = WreathElement.identity(ctx)
    else:
        rep = _find_iso(ctx, X, Y, chain, opts, counter)
    if rep is None:
        log.debug("empty coset after %d search nodes", counter["nodes"])
        return Coset.empty(ctx)
    if not X.maps_onto(rep.images(), Y):
        raise AssertionError("representative failed verification")
    log.debug("coset found after %d search nodes", counter["nodes"])
    return Coset(ctx, "nonempty", rep, list(chain.generators), chain.order(), chain)


def _find_iso(ctx, X, Y, chain, opts, counter):
    search = _Search(ctx, X, Y, chain, opts, counter)
    if search.N == 0:
        return search.dfs(0)
    search._tick(0)
    ok, cx, cy, ximg = search.state(0)
    if not ok:
        return None
    cands = search.candidates(0, cx, cy, ximg)
    if not opts.parallel or len(cands) < 2:
        return search._branch(0, cands)
    reps, seen = [], set()
    for lab in cands:
        key = search.class_key(0, lab)
        if key not in seen:
            seen.add(key)
            reps.append(lab)

    def run(lab):
        sub = search.clone()
        sub.assign(0, lab)
        return sub.dfs(1)

    with ThreadPoolExecutor() as pool:
        results = list(pool.map(run, reps))
    return next((g for g in results if g is not None), None)


def aut_group(ctx: CyclicContext, copies: int, edges, options: SolveOptions | None = None) -> Coset:
    return iso_coset(SolveInstance(ctx, copies, tuple(edges), tuple(edges), options or SolveOptions()))


# --- pipelines --------------------------------------------------------------


@dataclass
class IsoResult:
    isomorphic: bool
    representative: Permutation | None = None
    coset: Coset | None = None
    reason: str = ""

    @property
    def verdict(self) -> str:
        return "isomorphic" if self.isomorphic else "non-isomorphic"


def _check_cayley(objs, allow_non_cayley: bool) -> None:
    for name, obj in zip("XY", objs):
        ok, witness = is_cayley(obj)
        if not ok:
            if not allow_non_cayley:
                raise NotCayley(f"{name} is not invariant under x -> x+1: {witness}", witness)
            warnings.warn(f"{name} is not a Cayley object; only Wr(C)-isomorphisms are searched",
                          stacklevel=3)


def iso_relstruct(X: RelStruct, Y: RelStruct, allow_non_cayley: bool = False,
                  options: SolveOptions | None = None) -> IsoResult:
    if X.n != Y.n:
        return IsoResult(False, reason="ground sets differ")
    if X.signature() != Y.signature():
        return IsoResult(False, reason="relation arities or sizes differ")
    _check_cayley((X, Y), allow_non_cayley)
    HX, HY = encode(X), encode(Y)
    inst = SolveInstance(context(X.n), HX.m, HX.hypergraph.edges, HY.hypergraph.edges,
                         options or SolveOptions())
    coset = iso_coset(inst)
    if coset.is_empty():
        return IsoResult(False, coset=coset, reason="empty coset")
    f = coset.representative.to_perm()
    if apply_object(X, f) != Y:
        raise AssertionError("representative does not map X onto Y")
    return IsoResult(True, f, coset)


def iso_hypergraph(X: ColoredHypergraph, Y: ColoredHypergraph, allow_non_cayley: bool = False,
                   options: SolveOptions | None = None) -> IsoResult:
    if X.copies != 1 or Y.copies != 1:
        raise InputError("iso_hypergraph expects plain hypergraphs (copies = 1)")
    if X.n != Y.n:
        return IsoResult(False, reason="vertex counts differ")
    if _edge_profile(X.edges) != _edge_profile(Y.edges):
        return IsoResult(False, reason="edge colors or sizes differ")
    _check_cayley((X, Y), allow_non_cayley)
    coset = iso_coset(SolveInstance.from_hypergraphs(X, Y, options))
    if coset.is_empty():
        return IsoResult(False, coset=coset, reason="empty coset")
    f = coset.representative.to_perm()
    if apply_object(X, f) != Y:
        raise AssertionError("representative does not map X onto Y")
    return IsoResult(True, f, coset)


def iso(X, Y, allow_non_cayley: bool = False, options: SolveOptions | None = None) -> IsoResult:
    if isinstance(X, RelStruct) and isinstance(Y, RelStruct):
        return iso_relstruct(X, Y, allow_non_cayley, options)
    if isinstance(X, ColoredHypergraph) and isinstance(Y, ColoredHypergraph):
        return iso_hypergraph(X, Y, allow_non_cayley, options)
    raise InputError("cannot compare a relational structure with a hypergraph")


def aut(X, allow_non_cayley: bool = False, options: SolveOptions | None = None) -> Coset:
    _check_cayley((X,), allow_non_cayley)
    ctx = context(X.n)
    if isinstance(X, RelStruct):
        H = encode(X).hypergraph
        return aut_group(ctx, H.copies, H.edges, options)
    return aut_group(ctx, X.copies, X.edges, options)


def palfy_iso(X, Y) -> Permutation | None:
    """Search the n * phi(n) affine maps; complete when gcd(n, phi(n)) = 1."""
    n = X.n
    if math.gcd(n, euler_phi(n)) != 1:
        raise NotApplicable(f"gcd({n}, phi({n})) = {math.gcd(n, euler_phi(n))}")
    if Y.n != n:
        return None
    if isinstance(X, RelStruct):
        if not isinstance(Y, RelStruct) or X.signature() != Y.signature():
            return None
    elif not isinstance(Y, ColoredHypergraph) or _edge_profile(X.edges) != _edge_profile(Y.edges):
        return None
    for a in range(1, max(n, 2)):
        if math.gcd(a, n) != 1:
            continue
        for b in range(n):
            f = Permutation._trusted(tuple((a * x + b) % n for x in range(n)))
            if apply_object(X, f) == Y:
                return f
    return None
