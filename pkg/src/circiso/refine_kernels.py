"""Joint color refinement of two colored hypergraphs (solver hot loop).

Colors of points are refined by hashing the multiset of (edge hash, copy)
pairs they occur in; edge hashes are multiset hashes of (point color, copy).
The same hash is applied to both sides, so every isomorphism that respects
the initial point colors also respects the refined ones. A mismatch in color
or edge-hash histograms proves that no such isomorphism exists.
"""

from __future__ import annotations

import numpy as np

from ._backend import HAVE_NUMBA, use_numba

_S_EDGE = np.uint64(0x51ED270B27A1F3C5)
_S_POINT = np.uint64(0x2545F4914F6CDD1D)
_K1 = np.uint64(0x100000001B3)
_K2 = np.uint64(0xC2B2AE3D27D4EB4F)


def _mix_np(x):
    x = x + np.uint64(0x9E3779B97F4A7C15)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def _hist_equal_np(px, py) -> bool:
    top = int(max(px.max(initial=0), py.max(initial=0))) + 1
    return np.array_equal(np.bincount(px, minlength=top), np.bincount(py, minlength=top))


def _side_hashes_np(inc_e, inc_p, inc_c, ecol, n_edges, pc):
    eh = _mix_np(ecol.astype(np.uint64) ^ _S_EDGE)
    vals = _mix_np(pc[inc_p].astype(np.uint64) * _K1 + inc_c.astype(np.uint64))
    np.add.at(eh, inc_e, vals)
    ph = _mix_np(pc.astype(np.uint64) ^ _S_POINT)
    np.add.at(ph, inc_p, _mix_np(eh[inc_e] ^ (inc_c.astype(np.uint64) * _K2)))
    return eh, ph


def _refine_np(xe, xp, xc, xcol, ye, yp, yc, ycol, n_edges, px, py):
    n = px.shape[0]
    if not _hist_equal_np(px, py):
        return False, px, py
    classes = np.unique(np.concatenate((px, py))).size
    with np.errstate(over="ignore"):
        for _ in range(2 * n + 2):
            ehx, phx = _side_hashes_np(xe, xp, xc, xcol, n_edges, px)
            ehy, phy = _side_hashes_np(ye, yp, yc, ycol, n_edges, py)
            if not np.array_equal(np.sort(ehx), np.sort(ehy)):
                return False, px, py
            uniq, inv = np.unique(np.concatenate((phx, phy)), return_inverse=True)
            nx, ny = inv[:n].astype(np.int64), inv[n:].astype(np.int64)
            if not _hist_equal_np(nx, ny):
                return False, nx, ny
            px, py = nx, ny
            if uniq.size == classes:
                break
            classes = uniq.size
    return True, px, py


if HAVE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _mix_nb(x):
        x = x + np.uint64(0x9E3779B97F4A7C15)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return x ^ (x >> np.uint64(31))

    @njit(cache=True)
    def _hist_equal_nb(px, py):
        top = 0
        for v in px:
            if v > top:
                top = v
        for v in py:
            if v > top:
                top = v
        cnt = np.zeros(top + 1, dtype=np.int64)
        for v in px:
            cnt[v] += 1
        for v in py:
            cnt[v] -= 1
        for c in cnt:
            if c != 0:
                return False
        return True

    @njit(cache=True)
    def _side_hashes_nb(inc_e, inc_p, inc_c, ecol, n_edges, pc):
        eh = np.empty(n_edges, dtype=np.uint64)
        for e in range(n_edges):
            eh[e] = _mix_nb(np.uint64(ecol[e]) ^ np.uint64(0x51ED270B27A1F3C5))
        for k in range(inc_e.shape[0]):
            eh[inc_e[k]] += _mix_nb(np.uint64(pc[inc_p[k]]) * np.uint64(0x100000001B3)
                                    + np.uint64(inc_c[k]))
        n = pc.shape[0]
        ph = np.empty(n, dtype=np.uint64)
        for v in range(n):
            ph[v] = _mix_nb(np.uint64(pc[v]) ^ np.uint64(0x2545F4914F6CDD1D))
        for k in range(inc_e.shape[0]):
            ph[inc_p[k]] += _mix_nb(eh[inc_e[k]] ^ (np.uint64(inc_c[k]) * np.uint64(0xC2B2AE3D27D4EB4F)))
        return eh, ph

    @njit(cache=True)
    def _rank(h):
        order = np.argsort(h, kind="mergesort")
        out = np.empty(h.shape[0], dtype=np.int64)
        r = -1
        prev = np.uint64(0)
        for i in range(order.shape[0]):
            v = h[order[i]]
            if i == 0 or v != prev:
                r += 1
                prev = v
            out[order[i]] = r
        return out, r + 1

    @njit(cache=True)
    def _distinct(a):
        s = np.sort(a)
        c = 0
        for i in range(s.shape[0]):
            if i == 0 or s[i] != s[i - 1]:
                c += 1
        return c

    @njit(cache=True)
    def _refine_nb(xe, xp, xc, xcol, ye, yp, yc, ycol, n_edges, px, py):
        n = px.shape[0]
        if not _hist_equal_nb(px, py):
            return False, px, py
        classes = _distinct(np.concatenate((px, py)))
        for _ in range(2 * n + 2):
            ehx, phx = _side_hashes_nb(xe, xp, xc, xcol, n_edges, px)
            ehy, phy = _side_hashes_nb(ye, yp, yc, ycol, n_edges, py)
            sx = np.sort(ehx)
            sy = np.sort(ehy)
            for i in range(n_edges):
                if sx[i] != sy[i]:
                    return False, px, py
            ranks, k = _rank(np.concatenate((phx, phy)))
            nx = ranks[:n].copy()
            ny = ranks[n:].copy()
            if not _hist_equal_nb(nx, ny):
                return False, nx, ny
            px = nx
            py = ny
            if k == classes:
                break
            classes = k
        return True, px, py


def refine(xe, xp, xc, xcol, ye, yp, yc, ycol, n_edges, px, py):
    """Refine initial point colors ``px``/``py`` to a joint stable coloring.

    Returns ``(ok, px, py)``; ``ok`` is False when the two sides are
    distinguishable, in which case the colors are meaningless.
    """
    if use_numba():
        return _refine_nb(xe, xp, xc, xcol, ye, yp, yc, ycol, n_edges, px, py)
    return _refine_np(xe, xp, xc, xcol, ye, yp, yc, ycol, n_edges, px, py)


def color_hash(colors: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        return _mix_np(colors.astype(np.uint64) * _K2)
