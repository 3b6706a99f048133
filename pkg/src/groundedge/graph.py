"""Undirected simple graphs stored as sorted adjacency lists (CSR)."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from os import PathLike
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

logger = logging.getLogger(__name__)


class EdgeListParseError(ValueError):
    """Raised when an edge-list line cannot be parsed."""

    def __init__(self, path, lineno: int, line: str):
        self.path = path
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: expected two integer node labels, got {line.strip()!r}")


def canonical_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph.

    ``indptr``/``indices`` hold sorted neighbour lists in CSR layout, and
    ``labels[i]`` is the raw (file) label of dense node ``i``.  Raw labels
    are strictly increasing in dense id, so ordering by id equals ordering
    by raw label.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        for arr in (self.indptr, self.indices, self.labels):
            arr.flags.writeable = False

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]], n: int | None = None,
                   labels: Sequence[int] | None = None) -> "Graph":
        """Build from dense-id edges; self-loops and duplicates are dropped."""
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if n is None:
            n = int(arr.max()) + 1 if arr.size else 0
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint out of range")
        arr = arr[arr[:, 0] != arr[:, 1]]
        both = np.concatenate([arr, arr[:, ::-1]])
        A = sp.coo_matrix((np.ones(len(both)), (both[:, 0], both[:, 1])), shape=(n, n)).tocsr()
        A.sum_duplicates()
        A.sort_indices()
        if labels is None:
            labels = np.arange(n, dtype=np.int64)
        return cls(A.indptr.astype(np.int64), A.indices.astype(np.int64),
                   np.asarray(labels, dtype=np.int64).copy())

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.diff(self.indptr)
        d.flags.writeable = False
        return d

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return bool(k < len(nb) and nb[k] == v)

    def edges(self) -> list[tuple[int, int]]:
        """Canonical ``(u, v)`` pairs with ``u < v``, sorted."""
        rows = np.repeat(np.arange(self.n), self.degrees)
        mask = rows < self.indices
        return list(zip(rows[mask].tolist(), self.indices[mask].tolist()))

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        A = sp.csr_matrix((np.ones(len(self.indices)), self.indices, self.indptr),
                          shape=(self.n, self.n))
        return A

    def laplacian(self) -> sp.csr_matrix:
        return (sp.diags(self.degrees.astype(float)) - self.adjacency).tocsr()

    def node_of_label(self, label: int) -> int:
        k = np.searchsorted(self.labels, label)
        if k >= self.n or self.labels[k] != label:
            raise KeyError(label)
        return int(k)

    def add_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        return Graph.from_edges(self.edges() + [tuple(e) for e in edges], n=self.n, labels=self.labels)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.labels, other.labels))

    __hash__ = None

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _parse_line(path, lineno, line):
    tokens = line.split()
    try:
        return int(tokens[0]), int(tokens[1])
    except (IndexError, ValueError):
        raise EdgeListParseError(path, lineno, line) from None


def load_edge_list(path: str | PathLike) -> Graph:
    """Read a whitespace-separated edge list (KONECT/SNAP style).

    Lines starting with ``#`` or ``%`` are comments and tokens past the
    second are ignored.  Raw labels are compacted to dense ids in
    increasing label order.
    """
    raw = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s[0] in "#%":
                continue
            raw.append(_parse_line(path, lineno, s))
    arr = np.asarray(raw, dtype=np.int64).reshape(-1, 2)
    if arr.size and arr.min() < 0:
        raise ValueError(f"{path}: node labels must be non-negative")
    labels, dense = np.unique(arr, return_inverse=True)
    dense = dense.reshape(-1, 2)
    loops = int(np.count_nonzero(dense[:, 0] == dense[:, 1]))
    g = Graph.from_edges(dense, n=len(labels), labels=labels)
    dups = len(arr) - loops - g.m
    if loops or dups:
        logger.info("%s: dropped %d self-loops and %d duplicate edges", path, loops, dups)
    return g


def write_edge_list(g: Graph, path: str | PathLike) -> None:
    """Write ``g`` as a canonical edge list in raw labels."""
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in g.edges():
            fh.write(f"{g.labels[u]} {g.labels[v]}\n")


def induced_subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, np.ndarray]:
    """Subgraph on ``keep`` with compacted ids.

    Returns the subgraph (labels inherited from ``g``) and an ``old -> new``
    map with ``-1`` for removed nodes.
    """
    keep = np.unique(np.fromiter(keep, dtype=np.int64))
    if keep.size == 0:
        raise ValueError("keep set is empty")
    if keep[0] < 0 or keep[-1] >= g.n:
        raise ValueError("keep contains unknown node ids")
    mapping = np.full(g.n, -1, dtype=np.int64)
    mapping[keep] = np.arange(len(keep))
    sub = g.adjacency[keep][:, keep].tocsr()
    sub.sort_indices()
    h = Graph(sub.indptr.astype(np.int64), sub.indices.astype(np.int64), g.labels[keep].copy())
    return h, mapping


def largest_connected_component(g: Graph) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on the largest component (ties: smallest raw id)."""
    if g.n == 0:
        raise ValueError("graph is empty")
    ncomp, comp = connected_components(g.adjacency, directed=False)
    sizes = np.bincount(comp)
    # components are numbered in order of their smallest node id
    best = int(np.argmax(sizes))
    return induced_subgraph(g, np.flatnonzero(comp == best))


def bfs_distances(g: Graph, sources: Iterable[int]) -> np.ndarray:
    """Multi-source hop distances; unreachable nodes get ``inf``."""
    sources = list(sources)
    if not sources:
        raise ValueError("source set is empty")
    dist = np.full(g.n, np.inf)
    queue = deque()
    for s in sources:
        if dist[s] != 0:
            dist[s] = 0
            queue.append(s)
    indptr, indices = g.indptr, g.indices
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in indices[indptr[u]:indptr[u + 1]]:
            if dist[w] == np.inf:
                dist[w] = du
                queue.append(w)
    return dist


def is_connected(g: Graph, nodes: np.ndarray | None = None) -> bool:
    A = g.adjacency if nodes is None else g.adjacency[nodes][:, nodes]
    if A.shape[0] == 0:
        return False
    return connected_components(A, directed=False)[0] == 1
