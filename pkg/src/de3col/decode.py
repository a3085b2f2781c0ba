"""Genotype-phenotype mapping.

A weight vector is sorted into a vertex permutation, the permutation drives
a DSatur construction that colors with at most three colors, and the result
is scored by counting constraint-violating vertices.

Colors are stored as ``int8`` with ``1, 2, 3`` for the colors and
``UNCOLORED == 0`` for vertices DSatur had to skip.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .graph import Graph

__all__ = [
    "UNCOLORED",
    "Permutation",
    "Coloring",
    "weights_to_permutation",
    "dsatur_decode",
    "penalty",
    "evaluate",
]

UNCOLORED = 0


@dataclass(frozen=True, eq=False)
class Permutation:
    order: np.ndarray
    rank: np.ndarray

    @classmethod
    def from_order(cls, order) -> "Permutation":
        order = np.asarray(order, dtype=np.int64)
        n = len(order)
        rank = np.full(n, -1, dtype=np.int64)
        rank[order] = np.arange(n)
        if order.ndim != 1 or (n and (order.min() < 0 or order.max() >= n)) or np.any(rank < 0):
            raise ValueError("order is not a permutation of 0..n-1")
        return cls(order, rank)

    def __len__(self):
        return len(self.order)


@dataclass(frozen=True, eq=False)
class Coloring:
    """Partial 3-coloring.

    ``saturation[v]`` is the number of distinct colors on colored neighbours
    of ``v`` once decoding has finished.
    """

    color: np.ndarray
    saturation: np.ndarray
    uncolored_count: int

    @classmethod
    def from_colors(cls, g: Graph, color) -> "Coloring":
        """Wrap an arbitrary assignment (0 marks uncolored)."""
        color = np.asarray(color, dtype=np.int8)
        if color.shape != (g.n,):
            raise ValueError("need one color per vertex")
        return cls(color, _saturation(g, color), int(np.count_nonzero(color == UNCOLORED)))

    @property
    def n(self) -> int:
        return len(self.color)

    def __eq__(self, other):
        if not isinstance(other, Coloring):
            return NotImplemented
        return np.array_equal(self.color, other.color)

    __hash__ = None


def _saturation(g: Graph, color: np.ndarray) -> np.ndarray:
    bits = np.zeros(g.n, dtype=np.int8)
    for a, b in ((0, 1), (1, 0)):
        src, dst = g.edges[:, a], g.edges[:, b]
        c = color[src]
        ok = c != UNCOLORED
        np.bitwise_or.at(bits, dst[ok], (1 << (c[ok] - 1)).astype(np.int8))
    return _POPCOUNT[bits]


_POPCOUNT = np.array([0, 1, 1, 2, 1, 2, 2, 3], dtype=np.int8)


def weights_to_permutation(w, n: int | None = None) -> Permutation:
    """Vertices by weight, largest first; equal weights keep id order."""
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1:
        raise ValueError("weights must be one-dimensional")
    if n is not None and len(w) != n:
        raise ValueError(f"expected {n} weights, got {len(w)}")
    order = np.argsort(-w, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    return Permutation(order, rank)


@njit(cache=True)
def _heap_push(heap, size, key):
    k = size
    heap[k] = key
    while k > 0:
        parent = (k - 1) >> 1
        if heap[parent] <= key:
            break
        heap[k] = heap[parent]
        heap[parent] = key
        k = parent
    return size + 1


@njit(cache=True)
def _heap_pop(heap, size):
    size -= 1
    last = heap[size]
    k = 0
    while True:
        child = 2 * k + 1
        if child >= size:
            break
        if child + 1 < size and heap[child + 1] < heap[child]:
            child += 1
        if heap[child] >= last:
            break
        heap[k] = heap[child]
        k = child
    if size > 0:
        heap[k] = last
    return size


@njit(cache=True)
def _dsatur(indptr, indices, order):
    # heaps[s] holds permutation ranks of vertices that reached saturation s
    # (s = 1..3); stale entries are skipped lazily. Saturation-0 vertices are
    # found by a forward scan of the permutation, since none ever returns there.
    n = len(order)
    rank = np.empty(n, np.int64)
    for k in range(n):
        rank[order[k]] = k
    color = np.zeros(n, np.int8)
    bits = np.zeros(n, np.int8)
    sat = np.zeros(n, np.int8)
    done = np.zeros(n, np.bool_)
    heaps = np.empty((4, max(n, 1)), np.int64)
    sizes = np.zeros(4, np.int64)
    uncolored = 0
    scan = 0
    for _ in range(n):
        pick = -1
        for s in range(3, 0, -1):
            while sizes[s] > 0:
                v = order[heaps[s, 0]]
                if done[v] or sat[v] != s:
                    sizes[s] = _heap_pop(heaps[s], sizes[s])
                else:
                    pick = v
                    break
            if pick >= 0:
                break
        if pick < 0:
            while done[order[scan]] or sat[order[scan]] > 0:
                scan += 1
            pick = order[scan]
        done[pick] = True
        b = bits[pick]
        if b & 1 == 0:
            c = 1
        elif b & 2 == 0:
            c = 2
        elif b & 4 == 0:
            c = 3
        else:
            uncolored += 1
            continue
        color[pick] = c
        mark = np.int8(1 << (c - 1))
        for k in range(indptr[pick], indptr[pick + 1]):
            u = indices[k]
            if bits[u] & mark:
                continue
            bits[u] |= mark
            sat[u] += 1
            if not done[u]:
                s = sat[u]
                sizes[s] = _heap_push(heaps[s], sizes[s], rank[u])
    return color, sat, uncolored


def dsatur_decode(g: Graph, perm) -> Coloring:
    """Decode a permutation into a partial 3-coloring with DSatur.

    The next vertex is always one of maximal saturation degree; among those
    the earliest in ``perm`` wins. It receives the smallest color not used by
    a colored neighbour, or stays uncolored when all three are taken.
    Uncolored vertices never raise a neighbour's saturation.
    """
    order = perm.order if isinstance(perm, Permutation) else np.asarray(perm, dtype=np.int64)
    if len(order) != g.n:
        raise ValueError(f"permutation has {len(order)} entries for {g.n} vertices")
    color, sat, uncolored = _dsatur(g.indptr, g.indices, np.ascontiguousarray(order, dtype=np.int64))
    return Coloring(color, sat, int(uncolored))


def penalty(g: Graph, c: Coloring) -> int:
    """Number of vertices violating at least one of their constraints.

    A vertex is in violation when it is uncolored or shares its color with a
    neighbour. Zero exactly when ``c`` is a complete proper 3-coloring.
    """
    color = c.color
    bad = color == UNCOLORED
    if g.m:
        u, v = g.edges[:, 0], g.edges[:, 1]
        clash = (color[u] == color[v]) & (color[u] != UNCOLORED)
        if clash.any():
            bad = bad.copy()
            bad[u[clash]] = True
            bad[v[clash]] = True
    return int(np.count_nonzero(bad))


@njit(cache=True)
def _evaluate(indptr, indices, eu, ev, order):
    color, sat, uncolored = _dsatur(indptr, indices, order)
    bad = color == 0
    for k in range(len(eu)):
        c = color[eu[k]]
        if c != 0 and c == color[ev[k]]:
            bad[eu[k]] = True
            bad[ev[k]] = True
    return color, sat, uncolored, np.count_nonzero(bad)


def evaluate(g: Graph, w) -> tuple[Coloring, int]:
    """One objective evaluation: weights -> permutation -> coloring -> penalty.

    Same result as ``penalty(g, dsatur_decode(g, weights_to_permutation(w)))``
    in a single compiled call.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (g.n,):
        raise ValueError(f"expected {g.n} weights, got shape {w.shape}")
    order = (-w).argsort(kind="stable")
    color, sat, uncolored, pen = _evaluate(g.indptr, g.indices, g.edge_u, g.edge_v, order)
    return Coloring(color, sat, int(uncolored)), int(pen)
