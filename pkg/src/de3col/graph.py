"""Undirected graphs, DIMACS text I/O and random 3-colorable instances.

Vertices are ``0..n-1`` in memory and ``1..n`` in DIMACS files. Generated
graphs carry their hidden 3-partition so callers can check colorability.

Random streams come from :class:`numpy.random.Generator` over ``PCG64``
seeded with the plain integer seed, so the same ``(type, n, p, seed)`` gives
the same graph on every platform numpy supports.
"""
from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field

import numpy as np
from numba import njit

__all__ = [
    "Graph",
    "GraphType",
    "DimacsFormatError",
    "generate",
    "load_dimacs",
    "save_dimacs",
    "complete_graph",
    "cycle_graph",
    "path_graph",
]


class GraphType(enum.Enum):
    EQUIPARTITE = "equipartite"
    UNIFORM = "uniform"
    FLAT = "flat"

    @classmethod
    def parse(cls, value: "GraphType | str") -> "GraphType":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower().replace("-", "").replace("_", ""))
        except ValueError:
            names = ", ".join(t.value for t in cls)
            raise ValueError(f"unknown graph type {value!r} (expected one of {names})") from None


class DimacsFormatError(ValueError):
    """Malformed DIMACS input; ``lineno`` is 1-based (0 when not line specific)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno else ""
        super().__init__(prefix + message)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : array_like, shape (m, 2)
        Vertex pairs. Order and orientation are normalised: the stored array
        holds ``u < v`` rows sorted lexicographically, duplicates removed.
    partition : array_like of int, optional
        Ground-truth class in ``{0, 1, 2}`` for every vertex.
    """

    n: int
    edges: np.ndarray
    partition: np.ndarray | None = None
    indptr: np.ndarray = field(init=False, repr=False)
    indices: np.ndarray = field(init=False, repr=False)
    edge_u: np.ndarray = field(init=False, repr=False)
    edge_v: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = int(self.n)
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise ValueError("self-loops are not allowed")
            e = np.sort(e, axis=1)
            e = np.unique(e, axis=0)
        e = np.ascontiguousarray(e)

        part = None
        if self.partition is not None:
            part = np.array(self.partition, dtype=np.int64)
            if part.shape != (n,):
                raise ValueError("partition must have one entry per vertex")
            if part.size and (part.min() < 0 or part.max() > 2):
                raise ValueError("partition classes must lie in {0, 1, 2}")
            if e.size and np.any(part[e[:, 0]] == part[e[:, 1]]):
                raise ValueError("partition is not a proper 3-coloring of the edges")
            part = _readonly(part)

        # CSR adjacency, neighbours sorted ascending
        both = np.concatenate([e, e[:, ::-1]]) if e.size else np.empty((0, 2), np.int64)
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(both[:, 0], minlength=n), out=indptr[1:])

        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", _readonly(e))
        object.__setattr__(self, "partition", part)
        object.__setattr__(self, "indptr", _readonly(indptr))
        object.__setattr__(self, "indices", _readonly(np.ascontiguousarray(both[:, 1])))
        object.__setattr__(self, "edge_u", _readonly(np.ascontiguousarray(e[:, 0])))
        object.__setattr__(self, "edge_v", _readonly(np.ascontiguousarray(e[:, 1])))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    @property
    def adjacency(self) -> list[np.ndarray]:
        return [self.neighbors(v) for v in range(self.n)]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return bool(k < len(nb) and nb[k] == v)

    def checksum(self) -> str:
        """SHA-256 of the DIMACS serialisation."""
        return hashlib.sha256(save_dimacs(self)).hexdigest()

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        if self.n != other.n or not np.array_equal(self.edges, other.edges):
            return False
        if self.partition is None or other.partition is None:
            return self.partition is None and other.partition is None
        return np.array_equal(self.partition, other.partition)

    __hash__ = None

    def __repr__(self):
        tag = ", partitioned" if self.partition is not None else ""
        return f"Graph(n={self.n}, m={self.m}{tag})"


def complete_graph(n: int) -> Graph:
    iu, iv = np.triu_indices(n, 1)
    return Graph(n, np.column_stack([iu, iv]))


def cycle_graph(n: int) -> Graph:
    v = np.arange(n)
    return Graph(n, np.column_stack([v, (v + 1) % n]))


def path_graph(n: int) -> Graph:
    v = np.arange(n - 1)
    return Graph(n, np.column_stack([v, v + 1]))


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------

def _cross_pairs(partition: np.ndarray) -> np.ndarray:
    n = len(partition)
    iu, iv = np.triu_indices(n, 1)
    keep = partition[iu] != partition[iv]
    return np.column_stack([iu[keep], iv[keep]])


@njit(cache=True)
def _flat_select(n, pu, pv, draws):
    # Greedy: each step adds a uniformly chosen unused pair with minimal
    # endpoint-degree sum. draws[k] in [0, 1) picks among the tied pairs.
    deg = np.zeros(n, np.int64)
    used = np.zeros(len(pu), np.bool_)
    chosen = np.empty(len(draws), np.int64)
    for k in range(len(draws)):
        best = 1 << 62
        count = 0
        for e in range(len(pu)):
            if used[e]:
                continue
            s = deg[pu[e]] + deg[pv[e]]
            if s < best:
                best = s
                count = 1
            elif s == best:
                count += 1
        target = int(draws[k] * count)
        if target >= count:
            target = count - 1
        seen = 0
        for e in range(len(pu)):
            if used[e] or deg[pu[e]] + deg[pv[e]] != best:
                continue
            if seen == target:
                used[e] = True
                chosen[k] = e
                deg[pu[e]] += 1
                deg[pv[e]] += 1
                break
            seen += 1
    return chosen


def _equal_classes(n: int, rng: np.random.Generator) -> np.ndarray:
    part = np.empty(n, dtype=np.int64)
    part[rng.permutation(n)] = np.arange(n) % 3
    return part


def generate(type: GraphType | str, n: int, p: float, s: int) -> Graph:
    """Random 3-colorable graph ``G(type, n, p, s)``.

    Edges are only ever drawn between vertices of different hidden classes,
    so the stored partition always colors the graph properly.

    * equipartite: class sizes differ by at most one; each cross-class pair
      is kept independently with probability ``p``.
    * uniform: each vertex joins a class uniformly at random; pairs as above.
    * flat: classes as equipartite, then exactly ``round(p * P)`` edges out
      of the ``P`` cross-class pairs, added greedily so degrees stay level.
    """
    gtype = GraphType.parse(type)
    n = int(n)
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = np.random.Generator(np.random.PCG64(int(s)))

    if gtype is GraphType.UNIFORM:
        part = rng.integers(0, 3, size=n, dtype=np.int64)
    else:
        part = _equal_classes(n, rng)
    pairs = _cross_pairs(part)

    if gtype is GraphType.FLAT:
        m = int(np.floor(p * len(pairs) + 0.5))
        draws = rng.random(m)
        idx = _flat_select(n, pairs[:, 0].copy(), pairs[:, 1].copy(), draws)
        edges = pairs[idx]
    else:
        edges = pairs[rng.random(len(pairs)) < p]
    return Graph(n, edges, part)


# ---------------------------------------------------------------------------
# DIMACS
# ---------------------------------------------------------------------------

def load_dimacs(text: bytes | str) -> Graph:
    """Parse DIMACS ``.col`` text.

    Recognises ``c``, ``p edge N M`` (``p col`` is accepted too) and
    ``e U V`` lines. A ``c partition c1 ... cN`` comment restores the
    ground-truth partition. Duplicate edges are collapsed.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    n = None
    edges = []
    partition = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split()
        if not tok:
            continue
        kind = tok[0]
        if kind == "c":
            if len(tok) >= 2 and tok[1] == "partition":
                try:
                    partition = (lineno, [int(x) for x in tok[2:]])
                except ValueError:
                    raise DimacsFormatError("non-integer partition class", lineno) from None
        elif kind == "p":
            if n is not None:
                raise DimacsFormatError("duplicate problem line", lineno)
            if len(tok) < 3 or tok[1] not in ("edge", "col"):
                raise DimacsFormatError("expected 'p edge <n> <m>'", lineno)
            try:
                n = int(tok[2])
            except ValueError:
                raise DimacsFormatError("vertex count is not an integer", lineno) from None
            if n < 0:
                raise DimacsFormatError("negative vertex count", lineno)
        elif kind == "e":
            if n is None:
                raise DimacsFormatError("edge line before problem line", lineno)
            if len(tok) < 3:
                raise DimacsFormatError("expected 'e <u> <v>'", lineno)
            try:
                u, v = int(tok[1]), int(tok[2])
            except ValueError:
                raise DimacsFormatError("vertex id is not an integer", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsFormatError(f"vertex id out of range 1..{n}", lineno)
            if u == v:
                raise DimacsFormatError(f"self-loop on vertex {u}", lineno)
            edges.append((u - 1, v - 1))
        else:
            raise DimacsFormatError(f"unknown line type {kind!r}", lineno)
    if n is None:
        raise DimacsFormatError("missing 'p edge' problem line")

    part = None
    if partition is not None:
        lineno, classes = partition
        if len(classes) != n:
            raise DimacsFormatError(f"partition lists {len(classes)} classes for {n} vertices", lineno)
        part = classes
    try:
        return Graph(n, np.array(edges, dtype=np.int64).reshape(-1, 2), part)
    except ValueError as exc:
        raise DimacsFormatError(str(exc), partition[0] if partition else 0) from None


def save_dimacs(g: Graph) -> bytes:
    lines = []
    if g.partition is not None:
        lines.append("c partition " + " ".join(map(str, g.partition.tolist())))
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges.tolist())
    return ("\n".join(lines) + "\n").encode("ascii")
