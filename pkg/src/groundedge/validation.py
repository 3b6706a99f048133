"""Input validation for the estimator API."""

from __future__ import annotations

import numbers

import numpy as np
import scipy.sparse as sp

from .graph import Graph


def check_graph(X) -> Graph:
    """Coerce ``X`` to a :class:`Graph`.

    Accepts a :class:`Graph`, a square symmetric adjacency matrix (dense
    or scipy sparse; nonzeros off the diagonal are edges), an ``(m, 2)``
    integer edge array, or a networkx graph with integer nodes.
    """
    if isinstance(X, Graph):
        return X
    if hasattr(X, "edges") and hasattr(X, "nodes") and hasattr(X, "number_of_nodes"):
        nodes = sorted(X.nodes())
        if not all(isinstance(v, numbers.Integral) for v in nodes):
            raise TypeError("networkx graphs must have integer nodes")
        index = {v: i for i, v in enumerate(nodes)}
        return Graph.from_edges([(index[u], index[v]) for u, v in X.edges()], n=len(nodes), labels=nodes)
    if sp.issparse(X):
        A = sp.csr_matrix(X)
    else:
        arr = np.asarray(X)
        if arr.ndim == 2 and arr.shape[1] == 2 and arr.shape[0] != 2:
            if not np.issubdtype(arr.dtype, np.integer):
                raise TypeError("edge arrays must be integer")
            return Graph.from_edges(arr)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D adjacency matrix or edge array, got shape {arr.shape}")
        A = sp.csr_matrix(arr)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency matrix must be square, got {A.shape}")
    if (A != A.T).nnz:
        raise ValueError("adjacency matrix must be symmetric (undirected graph)")
    coo = sp.triu(A, k=1).tocoo()
    return Graph.from_edges(np.column_stack([coo.row, coo.col]), n=A.shape[0])


def check_grounded(g: Graph, grounded) -> tuple[int, ...]:
    if grounded is None:
        raise ValueError("a grounded node set is required")
    if isinstance(grounded, numbers.Integral):
        grounded = [grounded]
    S = sorted({int(s) for s in grounded})
    if not S:
        raise ValueError("grounded node set is empty")
    if S[0] < 0 or S[-1] >= g.n:
        raise ValueError(f"grounded node ids must lie in [0, {g.n})")
    if len(S) >= g.n:
        raise ValueError("at least one node must remain non-grounded")
    return tuple(S)


def check_k(k) -> int:
    if not isinstance(k, numbers.Integral) or isinstance(k, bool) or k < 0:
        raise ValueError(f"k must be a non-negative integer, got {k!r}")
    return int(k)
