"""Undirected simple graphs, traversal and walk counting."""

from __future__ import annotations

import re
from collections import deque
from typing import Iterable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

# Reserved maximal distance value; written as -1 in JSON.
UNREACHED = int(np.iinfo(np.int32).max)
DIST_DTYPE = np.int32

_HEADER = re.compile(r"^#\s*nodes:\s*(\d+)\s*$")


class EdgeListError(ValueError):
    """Malformed edge-list input."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SelfLoopError(EdgeListError):
    pass


class Graph:
    """Immutable undirected simple graph on nodes ``0..n-1``.

    Adjacency is stored CSR-style: ``indices[indptr[v]:indptr[v+1]]`` is the
    sorted neighbor list of ``v``.
    """

    __slots__ = ("n", "indptr", "indices", "_csr")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        self.n = int(n)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        self._csr = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "Graph":
        """Build from undirected pairs; duplicates and orientation are ignored."""
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        e = e.reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(e[:, 0] == e[:, 1]):
            raise SelfLoopError("self-loop")
        both = np.concatenate([e, e[:, ::-1]]) if e.size else e
        # dedupe via a sparse matrix in canonical (sorted) form
        a = sp.csr_matrix(
            (np.ones(len(both), dtype=np.int8), (both[:, 0], both[:, 1])), shape=(n, n)
        )
        a.sum_duplicates()
        a.sort_indices()
        return cls(n, a.indptr, a.indices)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self):
        return hash((self.n, self.indices.tobytes()))

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of pairs ``u < v`` in lexicographic order."""
        src = np.repeat(np.arange(self.n), self.degrees)
        keep = src < self.indices
        return np.stack([src[keep], self.indices[keep]], axis=1)

    def adjacency(self) -> sp.csr_matrix:
        """Sparse 0/1 adjacency matrix (float64)."""
        if self._csr is None:
            data = np.ones(len(self.indices), dtype=np.float64)
            self._csr = sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))
        return self._csr

    def add_edges(self, edges: Iterable) -> "Graph":
        extra = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        return Graph.from_edges(self.n, np.concatenate([self.edges(), extra]))

    def relabel(self, perm) -> "Graph":
        """Graph with node ``v`` renamed to ``perm[v]``."""
        perm = np.asarray(perm, dtype=np.int64)
        return Graph.from_edges(self.n, perm[self.edges()])


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines into a Graph.

    Lines starting with ``#`` are comments; a ``# nodes: N`` comment fixes the
    node count (so isolated high-index nodes survive a round trip).
    """
    pairs = []
    n_header = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            hm = _HEADER.match(line)
            if hm:
                n_header = int(hm.group(1))
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListError(f"expected 2 integers, got {len(tokens)} tokens", lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListError(f"non-integer token in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise EdgeListError("negative node id", lineno)
        if u == v:
            raise SelfLoopError(f"self-loop on node {u}", lineno)
        pairs.append((u, v))
    n = max([n_header] + [max(p) + 1 for p in pairs])
    return Graph.from_edges(n, pairs)


def to_edge_list(g: Graph) -> str:
    lines = [f"# nodes: {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges().tolist())
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_edge_list(g))


def bfs_distances(g: Graph, source: int, horizon: Optional[int] = None) -> np.ndarray:
    """Plain queue BFS from ``source``; UNREACHED beyond ``horizon`` or the component."""
    if not 0 <= source < g.n:
        raise IndexError(f"source {source} out of range for n={g.n}")
    dist = [UNREACHED] * g.n
    dist[source] = 0
    queue = deque([source])
    indptr, indices = g.indptr.tolist(), g.indices.tolist()
    while queue:
        x = queue.popleft()
        d = dist[x] + 1
        if horizon is not None and d > horizon:
            continue
        for y in indices[indptr[x] : indptr[x + 1]]:
            if dist[y] == UNREACHED:
                dist[y] = d
                queue.append(y)
    return np.array(dist, dtype=DIST_DTYPE)


def distance_matrix(g: Graph, horizon: Optional[int] = None) -> np.ndarray:
    """All-pairs shortest-walk distances as an ``int32`` matrix."""
    if g.n == 0:
        return np.zeros((0, 0), dtype=DIST_DTYPE)
    d = csgraph.shortest_path(g.adjacency(), method="D", unweighted=True, directed=False)
    out = np.full(d.shape, UNREACHED, dtype=DIST_DTYPE)
    finite = np.isfinite(d)
    if horizon is not None:
        finite &= d <= horizon
    out[finite] = d[finite].astype(DIST_DTYPE)
    out.setflags(write=False)
    return out


def walk_count_matrix(g: Graph, k: int) -> np.ndarray:
    """Dense ``(A + I)^k``: number of walks of length at most ``k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    at = (g.adjacency() + sp.identity(g.n, format="csr")).tocsr()
    m = at.toarray()
    for _ in range(k - 1):
        m = np.asarray(at @ m)
    m.setflags(write=False)
    return m


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    return bool(np.all(bfs_distances(g, 0) != UNREACHED))
