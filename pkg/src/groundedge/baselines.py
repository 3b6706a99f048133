"""Heuristic edge selectors used as comparison points.

The centrality baselines rank non-grounded nodes once on the original
graph, then join each selected node to the lowest-id grounded node it is
not yet adjacent to, skipping nodes adjacent to every grounded node.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import shortest_path
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .graph import Graph, bfs_distances
from .optimize import (
    MethodError,
    RunResult,
    Step,
    _selection_tol,
    build_candidates,
    _check_k,
)
from .spectral import GroundedSystem, SolverSettings, preconditioner_for, smallest_eigenpair

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CentralityScores:
    kind: str
    per_node: np.ndarray
    converged: bool = True


def degree_centrality(g: Graph) -> CentralityScores:
    return CentralityScores("degree", g.degrees.astype(float))


def eigenvector_centrality(g: Graph, tol: float = 1e-10) -> CentralityScores:
    """Leading adjacency eigenvector, unit 2-norm, non-negative (Lanczos)."""
    if g.n < 3:
        return CentralityScores("eigenvector", np.full(g.n, 1.0 / np.sqrt(max(g.n, 1))))
    x0 = np.ones(g.n) / np.sqrt(g.n)
    try:
        _, V = eigsh(g.adjacency.astype(float), k=1, which="LA", tol=tol, v0=x0)
    except ArpackNoConvergence as exc:
        logger.warning("eigenvector centrality did not converge: %s", exc)
        if exc.eigenvectors.shape[1] == 0:
            return CentralityScores("eigenvector", x0, converged=False)
        return CentralityScores("eigenvector", np.abs(exc.eigenvectors[:, 0]), converged=False)
    v = V[:, 0]
    return CentralityScores("eigenvector", np.abs(v) / np.linalg.norm(v))


def betweenness_centrality(g: Graph, batch: int | None = None) -> CentralityScores:
    """Exact unnormalised betweenness (Brandes), sources processed in batches.

    Each batch runs a level-synchronous BFS for ``batch`` sources at once,
    counting shortest paths forward and accumulating dependencies backward.
    """
    n = g.n
    A = g.adjacency
    if batch is None:
        batch = max(1, min(n, 2_000_000 // max(n, 1)))
    bc = np.zeros(n)
    for start in range(0, n, batch):
        src = np.arange(start, min(n, start + batch))
        cols = np.arange(len(src))
        sigma = np.zeros((n, len(src)))
        dist = np.full((n, len(src)), -1, dtype=np.int64)
        sigma[src, cols] = 1.0
        dist[src, cols] = 0
        frontier = sigma.copy()
        depth = 0
        while True:
            nxt = A @ frontier
            nxt[dist >= 0] = 0.0
            new = nxt > 0
            if not new.any():
                break
            depth += 1
            dist[new] = depth
            sigma[new] = nxt[new]
            frontier = np.where(new, nxt, 0.0)
        delta = np.zeros_like(sigma)
        safe = np.where(sigma > 0, sigma, 1.0)
        for level in range(depth, 0, -1):
            coeff = np.where(dist == level, (1.0 + delta) / safe, 0.0)
            delta += np.where(dist == level - 1, sigma * (A @ coeff), 0.0)
        delta[src, cols] = 0.0
        bc += delta.sum(axis=1)
    return CentralityScores("betweenness", bc / 2.0)


def _distance_rows(g: Graph, rows: np.ndarray, chunk: int = 512) -> np.ndarray:
    out = np.empty((len(rows), g.n), dtype=np.float64)
    for s in range(0, len(rows), chunk):
        out[s:s + chunk] = shortest_path(g.adjacency, directed=False, unweighted=True,
                                         indices=rows[s:s + chunk])
    return out


def closeness_centrality(g: Graph) -> CentralityScores:
    """``(n - 1) / sum of hop distances`` per node."""
    if g.n < 2:
        return CentralityScores("closeness", np.zeros(g.n))
    total = np.empty(g.n)
    chunk = max(1, 4_000_000 // g.n)
    for s in range(0, g.n, chunk):
        rows = np.arange(s, min(g.n, s + chunk))
        D = _distance_rows(g, rows)
        if np.isinf(D).any():
            raise ValueError("closeness needs a connected graph; extract the largest component first")
        total[rows] = D.sum(axis=1)
    return CentralityScores("closeness", (g.n - 1) / total)


def rank_nodes(scores: np.ndarray) -> np.ndarray:
    """Node ids by decreasing score; near-equal scores (1e-10 relative) tie-break on id."""
    scale = np.abs(scores).max() or 1.0
    key = np.round(scores / scale, 10)
    return np.lexsort((np.arange(len(scores)), -key))


def _trace(sys: GroundedSystem, method: str, picks, settings: SolverSettings) -> RunResult:
    """Add ``picks`` (edge, score) one at a time, recording the eigenvalue after each."""
    M = preconditioner_for(sys, settings)
    pair = smallest_eigenpair(sys, settings, M=M)
    result = RunResult(method, pair.eigenvalue)
    cur = sys
    for edge, score, t0 in picks:
        cur = cur.with_edges([edge])
        try:
            pair = smallest_eigenpair(cur, settings, x0=pair.vector, M=M)
        except Exception as exc:
            raise MethodError(f"{method}: eigensolver failed: {exc}", result) from exc
        result.steps.append(Step(edge, pair.eigenvalue, float(score), (time.perf_counter() - t0) * 1e3))
    return result


def ranking_baseline(sys: GroundedSystem, k: int, scores: CentralityScores,
                     settings: SolverSettings | None = None) -> RunResult:
    """Attach the top-``k`` eligible non-grounded nodes by ``scores``."""
    settings = settings or SolverSettings()
    t0 = time.perf_counter()
    avail = build_candidates(sys).availability(sys)
    picks = []
    for v in rank_nodes(scores.per_node):
        p = sys.position[v]
        if p < 0 or not avail[:, p].any():
            continue
        a = int(np.argmax(avail[:, p]))
        picks.append(((sys.grounded[a], int(v)), scores.per_node[v], t0))
        if len(picks) == k:
            break
    if len(picks) < k:
        raise ValueError(f"only {len(picks)} eligible non-grounded nodes for k={k}")
    result = _trace(sys, scores.kind, picks, settings)
    result.info["converged"] = scores.converged
    return result


def degree_baseline(sys, k, settings=None):
    return ranking_baseline(sys, k, degree_centrality(sys.graph), settings)


def eigenvector_baseline(sys, k, settings=None):
    return ranking_baseline(sys, k, eigenvector_centrality(sys.graph), settings)


def betweenness_baseline(sys, k, settings=None):
    return ranking_baseline(sys, k, betweenness_centrality(sys.graph), settings)


def closeness_baseline(sys, k, settings=None):
    return ranking_baseline(sys, k, closeness_centrality(sys.graph), settings)


def kcenter_baseline(sys: GroundedSystem, k: int, settings: SolverSettings | None = None) -> RunResult:
    """Repeatedly add the edge minimising the largest hop distance to the grounded set.

    Joining grounded ``t`` to ``i`` changes distances to
    ``min(d(v), 1 + dist(i, v))``; paths through other new edges enter the
    grounded set and are never shorter.  Ties go to the smaller
    non-grounded id, then the smaller grounded id.
    """
    settings = settings or SolverSettings()
    cands = build_candidates(sys)
    _check_k(k, cands)
    avail = cands.availability(sys)
    g = sys.graph.add_edges(sys.added) if sys.added else sys.graph
    d = bfs_distances(g, sys.grounded)
    cache_ok = sys.dim * g.n * 8 <= (512 << 20)
    D = _distance_rows(g, sys.free) if cache_ok else None
    picks = []
    for _ in range(k):
        t0 = time.perf_counter()
        eligible = np.flatnonzero(avail.any(axis=0))
        ecc = np.empty(len(eligible))
        for s in range(0, len(eligible), 256):
            block = eligible[s:s + 256]
            rows = D[block] if D is not None else _distance_rows(g, sys.free[block])
            ecc[s:s + 256] = np.minimum(d[None, :], 1.0 + rows).max(axis=1)
        j = int(np.flatnonzero(ecc == ecc.min())[0])
        p = int(eligible[j])
        a = int(np.argmax(avail[:, p]))
        avail[a, p] = False
        row = D[p] if D is not None else _distance_rows(g, sys.free[[p]])[0]
        d = np.minimum(d, 1.0 + row)
        picks.append(((sys.grounded[a], int(sys.free[p])), ecc[j], t0))
    return _trace(sys, "kcenter", picks, settings)


def eigen_approx_baseline(sys: GroundedSystem, k: int, settings: SolverSettings | None = None) -> RunResult:
    """Repeatedly attach the eligible node with the largest eigenvector entry."""
    settings = settings or SolverSettings()
    cands = build_candidates(sys)
    _check_k(k, cands)
    avail = cands.availability(sys)
    M = preconditioner_for(sys, settings)
    pair = smallest_eigenpair(sys, settings, M=M)
    result = RunResult("eigenapprox", pair.eigenvalue)
    cur = sys
    for _ in range(k):
        t0 = time.perf_counter()
        eligible = np.flatnonzero(avail.any(axis=0))
        u = pair.vector[eligible]
        p = int(eligible[np.flatnonzero(u >= u.max() - _selection_tol(u.max()))[0]])
        a = int(np.argmax(avail[:, p]))
        edge = (cur.grounded[a], int(cur.free[p]))
        avail[a, p] = False
        score = float(pair.vector[p])
        cur = cur.with_edges([edge])
        try:
            pair = smallest_eigenpair(cur, settings, x0=pair.vector, M=M)
        except Exception as exc:
            raise MethodError(f"eigenapprox: eigensolver failed: {exc}", result) from exc
        result.steps.append(Step(edge, pair.eigenvalue, score, (time.perf_counter() - t0) * 1e3))
    return result


BASELINES = {
    "degree": degree_baseline,
    "eigenvector": eigenvector_baseline,
    "betweenness": betweenness_baseline,
    "closeness": closeness_baseline,
    "kcenter": kcenter_baseline,
    "eigenapprox": eigen_approx_baseline,
}
