"""Exact batch test "does permutation k map X onto Y" for the brute-force oracles.

An edge is a set of (point, slot) pairs, encoded exactly as a bitmask with
bit ``(slot - 1) * n + point``; this needs ``n * slots <= 64``. Y is stored as
per-color sorted masks, and a permutation is accepted iff every mapped X-edge
is found among the Y-edges of its color (both edge lists are duplicate-free
and equally long, so this is equality).
"""

from __future__ import annotations

import numpy as np

from ._backend import HAVE_NUMBA, use_numba

MAX_BITS = 64


def _bits(points, slots, n):
    return (slots - 1) * n + points


def _match_np(perms, inc_e, inc_p, inc_s, n_edges, ecol_rank, y_sorted, y_start, y_stop, n):
    K = perms.shape[0]
    bit = (inc_s - 1) * n + perms[:, inc_p]          # (K, I)
    vals = np.left_shift(np.uint64(1), bit.astype(np.uint64))
    masks = np.zeros((K, n_edges), dtype=np.uint64)
    np.bitwise_or.at(masks, (slice(None), inc_e), vals)
    ok = np.ones(K, dtype=bool)
    for c in range(y_start.shape[0]):
        cols = np.nonzero(ecol_rank == c)[0]
        if cols.size == 0:
            continue
        ys = y_sorted[y_start[c]:y_stop[c]]
        m = masks[:, cols]
        pos = np.searchsorted(ys, m)
        pos = np.minimum(pos, ys.size - 1)
        ok &= (ys[pos] == m).all(axis=1)
    return ok


if HAVE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _match_nb(perms, inc_e, inc_p, inc_s, n_edges, ecol_rank, y_sorted, y_start, y_stop, n):
        K = perms.shape[0]
        ok = np.ones(K, dtype=np.bool_)
        masks = np.zeros(n_edges, dtype=np.uint64)
        for k in range(K):
            masks[:] = 0
            for i in range(inc_e.shape[0]):
                b = (inc_s[i] - 1) * n + perms[k, inc_p[i]]
                masks[inc_e[i]] |= np.uint64(1) << np.uint64(b)
            for e in range(n_edges):
                c = ecol_rank[e]
                lo = y_start[c]
                hi = y_stop[c]
                v = masks[e]
                while lo < hi:
                    mid = (lo + hi) // 2
                    if y_sorted[mid] < v:
                        lo = mid + 1
                    else:
                        hi = mid
                if lo >= y_stop[c] or y_sorted[lo] != v:
                    ok[k] = False
                    break
        return ok


class EdgeMatcher:
    """Prepared X/Y pair; ``match(perms)`` returns a boolean mask over rows."""

    def __init__(self, n: int, x_edges, y_edges):
        self.n = n
        colors = sorted({c for c, _ in x_edges} | {c for c, _ in y_edges})
        rank = {c: i for i, c in enumerate(colors)}
        slots = max([s for _, e in list(x_edges) + list(y_edges) for _, s in e], default=1)
        if n * slots > MAX_BITS:
            raise ValueError(f"{n} points x {slots} slots exceed {MAX_BITS} bits")
        self.comparable = sorted(_profile(x_edges)) == sorted(_profile(y_edges))
        inc_e, inc_p, inc_s = [], [], []
        for eid, (_, e) in enumerate(x_edges):
            for p, s in sorted(e):
                inc_e.append(eid)
                inc_p.append(p)
                inc_s.append(s)
        self.inc_e = np.asarray(inc_e, dtype=np.int64)
        self.inc_p = np.asarray(inc_p, dtype=np.int64)
        self.inc_s = np.asarray(inc_s, dtype=np.int64)
        self.n_edges = len(x_edges)
        self.ecol_rank = np.asarray([rank[c] for c, _ in x_edges], dtype=np.int64)
        per_color = [[] for _ in colors]
        for c, e in y_edges:
            m = 0
            for p, s in e:
                m |= 1 << ((s - 1) * n + p)
            per_color[rank[c]].append(m)
        flat, start, stop = [], [], []
        for ms in per_color:
            start.append(len(flat))
            flat.extend(sorted(ms))
            stop.append(len(flat))
        self.y_sorted = np.asarray(flat, dtype=np.uint64)
        self.y_start = np.asarray(start, dtype=np.int64)
        self.y_stop = np.asarray(stop, dtype=np.int64)

    def match(self, perms: np.ndarray) -> np.ndarray:
        perms = np.ascontiguousarray(perms, dtype=np.int64)
        if not self.comparable:
            return np.zeros(perms.shape[0], dtype=bool)
        if self.n_edges == 0:
            return np.ones(perms.shape[0], dtype=bool)
        args = (perms, self.inc_e, self.inc_p, self.inc_s, self.n_edges, self.ecol_rank,
                self.y_sorted, self.y_start, self.y_stop, self.n)
        if use_numba():
            return _match_nb(*args)
        return _match_np(*args)


def _profile(edges):
    return [(c, len(e)) for c, e in edges]
