"""Edge selection for maximising the smallest grounded-Laplacian eigenvalue.

All selectors work on a :class:`~groundedge.spectral.GroundedSystem` and
pick edges joining one grounded and one non-grounded node.  Ties are
broken deterministically; see each function.
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .graph import Graph, canonical_edge
from .spectral import (
    EigenPair,
    GroundedSystem,
    SolverSettings,
    lambda2_follower_subgraph,
    preconditioner_for,
    smallest_eigenpair,
    smallest_eigenvalue_dense,
)

logger = logging.getLogger(__name__)

#: Relative tolerance under which two objective values count as tied.
TIE_RTOL = 1e-10


class SaturatedError(ValueError):
    """No candidate edge is left between grounded and non-grounded nodes."""


class BudgetExceededError(ValueError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"exhaustive search needs {count} subsets, cap is {cap}")


class MethodError(RuntimeError):
    """A selector failed part-way; ``partial`` holds the steps completed so far."""

    def __init__(self, message, partial: "RunResult"):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class Step:
    edge: tuple[int, int]
    lambda_after: float
    score: float
    elapsed_ms: float


@dataclass
class RunResult:
    method: str
    initial_lambda: float
    steps: list[Step] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [s.edge for s in self.steps]

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([s.lambda_after for s in self.steps])

    @property
    def final_lambda(self) -> float:
        return self.steps[-1].lambda_after if self.steps else self.initial_lambda


@dataclass(frozen=True)
class CandidateSet:
    """``(S x (V \\ S)) \\ (E u T)`` ordered by grounded id, then non-grounded id."""

    edges: tuple[tuple[int, int], ...]
    grounded_index: np.ndarray  # row into sys.grounded, per edge
    node_index: np.ndarray  # matrix index of the non-grounded endpoint, per edge

    def __len__(self):
        return len(self.edges)

    def availability(self, sys: GroundedSystem) -> np.ndarray:
        """Boolean ``(s, dim)`` matrix: ``[a, p]`` set iff ``(S[a], free[p])`` is a candidate."""
        avail = np.zeros((sys.s, sys.dim), dtype=bool)
        avail[self.grounded_index, self.node_index] = True
        return avail


def build_candidates(sys: GroundedSystem, allow_empty: bool = False) -> CandidateSet:
    """Candidate edges of the grounded-to-follower problem.

    Raises :class:`SaturatedError` when every non-grounded node is already
    joined to every grounded node (unless ``allow_empty``).
    """
    g = sys.graph
    taken = set(sys.added)
    edges, gi, ni = [], [], []
    for a, t in enumerate(sys.grounded):
        mask = np.ones(g.n, dtype=bool)
        mask[g.neighbors(t)] = False
        mask &= ~sys.is_grounded
        for i in np.flatnonzero(mask).tolist():
            if (t, i) not in taken:
                edges.append((t, i))
                gi.append(a)
                ni.append(sys.position[i])
    if not edges and not allow_empty:
        raise SaturatedError("already saturated: every non-grounded node is adjacent to all grounded nodes")
    return CandidateSet(tuple(edges), np.array(gi, dtype=np.int64), np.array(ni, dtype=np.int64))


def _check_k(k, cands):
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > len(cands):
        raise ValueError(f"k={k} exceeds the {len(cands)} available candidate edges")


def _tied_max(values: np.ndarray) -> np.ndarray:
    """Indices whose value ties the maximum (relative tolerance ``TIE_RTOL``)."""
    top = values.max()
    return np.flatnonzero(values >= top - TIE_RTOL * max(abs(top), 1.0))


def _selection_tol(top: float) -> float:
    return TIE_RTOL * max(abs(top), 1.0)


# exhaustive search -------------------------------------------------------

def _edge_key(edge, grounded_mask):
    """Lexicographic key: grounded-to-follower edges sort by (follower, grounded)."""
    u, v = edge
    if grounded_mask[u] and not grounded_mask[v]:
        return (v, u)
    if grounded_mask[v] and not grounded_mask[u]:
        return (u, v)
    return canonical_edge(u, v)


def _edge_increment(edge, grounded_mask, position):
    """Sparse (rows, cols, vals) change to the grounded Laplacian from adding ``edge``."""
    u, v = edge
    gu, gv = grounded_mask[u], grounded_mask[v]
    if gu and gv:
        return [], [], []
    if gu or gv:
        p = position[v] if gu else position[u]
        return [p], [p], [1.0]
    pu, pv = position[u], position[v]
    return [pu, pv, pu, pv], [pu, pv, pv, pu], [1.0, 1.0, -1.0, -1.0]


def _exhaustive_search(base: np.ndarray, increments, k: int, batch_bytes=64 << 20):
    """Enumerate k-subsets of ``increments`` in lexicographic order.

    Returns ``(best_value, best_subset_indices)``; later subsets replace
    the incumbent only if strictly better beyond the tie tolerance.
    """
    p = base.shape[0]
    if k == 0:
        return smallest_eigenvalue_dense(base), ()
    batch = max(1, batch_bytes // (8 * p * p))
    best_val, best_combo = -np.inf, None
    combos = itertools.combinations(range(len(increments)), k)
    while True:
        chunk = list(itertools.islice(combos, batch))
        if not chunk:
            break
        stack = np.broadcast_to(base, (len(chunk), p, p)).copy()
        for b, combo in enumerate(chunk):
            for c in combo:
                r, col, val = increments[c]
                stack[b, r, col] += val
        vals = np.linalg.eigvalsh(stack)[:, 0]
        top = vals.max()
        if top > best_val + _selection_tol(best_val if np.isfinite(best_val) else top):
            j = int(np.flatnonzero(vals >= top - _selection_tol(top))[0])
            best_val, best_combo = float(vals[j]), chunk[j]
    return best_val, best_combo


def exhaustive_optimum(sys: GroundedSystem, k: int, cap: int = 10**6,
                       candidates: Sequence[tuple[int, int]] | None = None) -> RunResult:
    """Best ``k``-subset of candidate edges by brute force.

    ``candidates`` defaults to the grounded-to-follower set; any non-edges
    (including follower pairs) may be passed instead.  Ties go to the
    lexicographically smallest sorted edge list, where a grounded-follower
    edge ``(t, i)`` sorts as ``(i, t)``.  The trace lists the optimum's
    edges in that order with the eigenvalue of each prefix.
    """
    t0 = time.perf_counter()
    g = sys.graph
    if candidates is None:
        candidates = build_candidates(sys).edges
    mask = sys.is_grounded
    cand = sorted(set(_edge_key(e, mask) for e in candidates))
    for u, v in cand:
        if g.has_edge(u, v) or u == v:
            raise ValueError(f"candidate ({u}, {v}) is not a new edge")
    if not 0 <= k <= len(cand):
        raise ValueError(f"k={k} outside [0, {len(cand)}]")
    count = math.comb(len(cand), k)
    if count > cap:
        raise BudgetExceededError(count, cap)
    base = sys.dense()
    incs = [_edge_increment(e, mask, sys.position) for e in cand]
    best_val, combo = _exhaustive_search(base, incs, k)
    chosen = [cand[c] for c in combo]
    result = RunResult("exhaustive", smallest_eigenvalue_dense(base), info={"subsets": count})
    M = base.copy()
    prev = result.initial_lambda
    elapsed = (time.perf_counter() - t0) * 1e3
    for c in combo:
        r, col, val = incs[c]
        np.add.at(M, (r, col), val)
        lam = smallest_eigenvalue_dense(M)
        e = cand[c]
        edge = (e[1], e[0]) if mask[e[1]] and not mask[e[0]] else e
        result.steps.append(Step(edge, lam, lam - prev, elapsed / max(k, 1)))
        prev = lam
    result.info["optimum"] = best_val
    return result


def problem_candidates(sys: GroundedSystem) -> list[tuple[int, int]]:
    """All non-edges ``(V x V) \\ E`` of the graph, canonical and sorted."""
    g = sys.graph
    taken = {canonical_edge(*e) for e in sys.added}
    return [(u, v) for u in range(g.n) for v in range(u + 1, g.n)
            if not g.has_edge(u, v) and (u, v) not in taken]


@dataclass(frozen=True)
class EquivalenceReport:
    k: int
    lambda_all_pairs: float
    lambda_grounded_pairs: float
    edges_all_pairs: tuple
    edges_grounded_pairs: tuple

    @property
    def match(self) -> bool:
        return abs(self.lambda_all_pairs - self.lambda_grounded_pairs) <= 1e-9


def verify_problem_equivalence(sys: GroundedSystem, k: int, cap: int = 10**6) -> EquivalenceReport:
    """Compare exhaustive optima over all non-edges and over grounded-follower non-edges.

    Mismatches are logged, never raised.
    """
    if k == 0:
        lam = smallest_eigenvalue_dense(sys.dense())
        return EquivalenceReport(0, lam, lam, (), ())
    full = exhaustive_optimum(sys, k, cap, candidates=problem_candidates(sys))
    pruned = exhaustive_optimum(sys, k, cap)
    rep = EquivalenceReport(k, full.final_lambda, pruned.final_lambda,
                            tuple(full.edges), tuple(pruned.edges))
    if not rep.match:
        logger.warning("pruned candidate set is suboptimal: %.12g (all pairs %s) vs %.12g (pruned %s)",
                       rep.lambda_all_pairs, rep.edges_all_pairs,
                       rep.lambda_grounded_pairs, rep.edges_grounded_pairs)
    return rep


# exact greedy ------------------------------------------------------------

def rank_one_smallest(w: np.ndarray, Z: np.ndarray, max_iter: int = 100) -> np.ndarray:
    """Smallest eigenvalue of ``diag(w) + z z^T`` for every row ``z`` of ``Z``.

    ``w`` must be ascending.  Solves the secular equation
    ``1 + sum_j z_j^2 / (w_j - mu) = 0``
    with bracketed Newton steps, working in offsets from ``w_0``.  The root
    lies in ``[w_0, min(w_1, w_0 + z_0^2)]``.
    """
    Z = np.atleast_2d(Z)
    z2 = Z * Z
    if len(w) == 1:
        return w[0] + z2[:, 0]
    gaps = w - w[0]
    hi = np.minimum(gaps[1], z2[:, 0])
    lo = np.zeros(len(Z))
    delta = 0.5 * hi
    live = hi > 1e-15 * max(1.0, abs(w[-1]))
    delta[~live] = 0.0
    for _ in range(max_iter):
        if not live.any():
            break
        d = gaps[None, :] - delta[live, None]  # w_j - mu
        q = z2[live] / d
        f = 1.0 + q.sum(axis=1)
        fp = (q / d).sum(axis=1)
        lo_l, hi_l, de = lo[live], hi[live], delta[live]
        below = f < 0
        lo_l = np.where(below, de, lo_l)
        hi_l = np.where(below, hi_l, de)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = de - f / fp
        ok = (newton > lo_l) & (newton < hi_l) & np.isfinite(newton)
        new = np.where(ok, newton, 0.5 * (lo_l + hi_l))
        done = (np.abs(new - de) <= 4e-16 * np.maximum(new, 1e-300) + 1e-300) | (hi_l - lo_l <= 1e-15 * hi_l)
        lo[live], hi[live], delta[live] = lo_l, hi_l, new
        idx = np.flatnonzero(live)
        live[idx[done]] = False
    return w[0] + delta


def _dense_spectrum(sys: GroundedSystem):
    w, V = scipy.linalg.eigh(sys.dense(), driver="evd")
    return w, V


def greedy_exact(sys: GroundedSystem, k: int, settings: SolverSettings | None = None,
                 strategy: str = "secular") -> RunResult:
    """Greedy selection by exact eigengain.

    Every edge ``(t, i)`` adds one to the diagonal entry of ``i``, so the
    exact value of adding it is the smallest eigenvalue of a rank-one
    update.  ``strategy="secular"`` evaluates all candidates from one full
    eigendecomposition per step; ``strategy="direct"`` re-solves each
    candidate matrix from scratch.  Ties go to the smaller non-grounded
    id, then the smaller grounded id.
    """
    if strategy not in ("secular", "direct"):
        raise ValueError(f"unknown strategy {strategy!r}")
    cands = build_candidates(sys)
    _check_k(k, cands)
    avail = cands.availability(sys)
    cur = sys
    w, V = _dense_spectrum(cur)
    A = cur.dense()
    lam = float(w[0])
    result = RunResult("greedy", lam)
    for _ in range(k):
        t0 = time.perf_counter()
        eligible = np.flatnonzero(avail.any(axis=0))
        if strategy == "secular":
            values = rank_one_smallest(w, V[eligible])
        else:
            values = np.empty(len(eligible))
            for j, p in enumerate(eligible):
                A[p, p] += 1.0
                values[j] = smallest_eigenvalue_dense(A)
                A[p, p] -= 1.0
        gains = values - lam
        p = int(eligible[_tied_max(gains)[0]])
        a = int(np.argmax(avail[:, p]))
        edge = (cur.grounded[a], int(cur.free[p]))
        avail[a, p] = False
        cur = cur.with_edges([edge])
        A[p, p] += 1.0
        w, V = _dense_spectrum(cur)
        lam_after = float(w[0])
        result.steps.append(Step(edge, lam_after, float(gains.max()), (time.perf_counter() - t0) * 1e3))
        lam = lam_after
    return result


# fast greedy --------------------------------------------------------------

def eigengain_estimates(sys: GroundedSystem, pair: EigenPair) -> np.ndarray:
    """``2 u_i * sum_{j in N_i \\ S} u_j`` for every non-grounded node (matrix order)."""
    u = pair.vector
    return 2.0 * u * (sys.follower_adjacency @ u)


def _node_index(sys, i):
    p = sys.position[i] if 0 <= i < sys.n else -1
    if p < 0:
        raise ValueError(f"node {i} is grounded or unknown")
    return p


def estimate_gain_nongrounded_pair(sys: GroundedSystem, pair: EigenPair, i: int, j: int) -> float:
    """First-order gain of joining two non-grounded nodes: ``(u_i - u_j)^2``."""
    if i == j:
        raise ValueError("endpoints must differ")
    u = pair.vector
    return float((u[_node_index(sys, i)] - u[_node_index(sys, j)]) ** 2)


def estimate_gain_grounding(sys: GroundedSystem, pair: EigenPair, i: int) -> float:
    """First-order gain of joining ``i`` to a grounded node: ``u_i^2``."""
    return float(pair.vector[_node_index(sys, i)] ** 2)


def interlacing_upper_bound(sys: GroundedSystem, i: int) -> float:
    """``lambda((L_{-S}(T))_{-i}) - lambda(L_{-S}(T))`` computed densely."""
    p = _node_index(sys, i)
    if sys.dim < 2:
        raise ValueError("system must keep at least one node after removing i")
    A = sys.dense()
    keep = np.delete(np.arange(sys.dim), p)
    return smallest_eigenvalue_dense(A[np.ix_(keep, keep)]) - smallest_eigenvalue_dense(A)


def _unique_min_degree(sys: GroundedSystem, p: int) -> bool:
    d = sys.diagonal
    return bool(d[p] == d.min() and np.count_nonzero(d == d.min()) == 1)


def greedy_fast(sys: GroundedSystem, k: int, settings: SolverSettings | None = None) -> RunResult:
    """Greedy selection by the perturbation estimate of the eigengain.

    One eigenpair solve per step scores every candidate ``(t, i)`` by
    ``2 u_i sum_{j in N_i \\ S} u_j``.  Ties go to the larger ``u_i``, then
    the smaller non-grounded id, then the smaller grounded id.  The next
    step's solve doubles as the recorded eigenvalue, plus one final solve.
    """
    settings = settings or SolverSettings()
    cands = build_candidates(sys)
    _check_k(k, cands)
    avail = cands.availability(sys)
    M = preconditioner_for(sys, settings)
    pair = smallest_eigenpair(sys, settings, M=M)
    result = RunResult("fast", pair.eigenvalue, info={"unique_min_degree_steps": [], "solver_iterations": [pair.iterations]})
    cur = sys
    for step in range(k):
        t0 = time.perf_counter()
        scores = eigengain_estimates(cur, pair)
        eligible = np.flatnonzero(avail.any(axis=0))
        sc = scores[eligible]
        tied = eligible[_tied_max(sc)]
        u = pair.vector
        tied = tied[u[tied] >= u[tied].max() - _selection_tol(u[tied].max())]
        p = int(tied[0])
        a = int(np.argmax(avail[:, p]))
        edge = (cur.grounded[a], int(cur.free[p]))
        if _unique_min_degree(cur, p):
            result.info["unique_min_degree_steps"].append(step)
        avail[a, p] = False
        cur = cur.with_edges([edge])
        try:
            pair = smallest_eigenpair(cur, settings, x0=pair.vector, M=M)
        except Exception as exc:
            raise MethodError(f"eigensolver failed at step {step}: {exc}", result) from exc
        result.info["solver_iterations"].append(pair.iterations)
        result.steps.append(Step(edge, pair.eigenvalue, float(scores[p]), (time.perf_counter() - t0) * 1e3))
    return result


# approximation-ratio bounds ----------------------------------------------

@dataclass(frozen=True)
class RatioBounds:
    """Lower bound on the submodularity ratio and upper bound on the curvature.

    ``informative`` is False when ``2 s sqrt(n - s) / lambda_2 >= 1``; the
    raw formula values of ``gamma_lower`` and ``alpha_upper`` are still
    reported, and ``approx_ratio_lower`` is NaN.
    """

    n: int
    s: int
    lambda2: float
    gamma_lower: float
    alpha_upper: float
    approx_ratio_lower: float
    informative: bool


def ratio_from_bounds(gamma: float, alpha: float) -> float:
    """``(1 - exp(-alpha * gamma)) / alpha``, with the ``alpha -> 0`` limit ``gamma``."""
    if alpha == 0:
        return gamma
    return -math.expm1(-alpha * gamma) / alpha


def ratio_bounds_from_lambda2(n: int, s: int, lambda2: float) -> RatioBounds:
    term = 2 * s * math.sqrt(n - s) / lambda2
    gamma = (1 - term) ** 2 / (s * n)
    alpha = 1 - gamma
    informative = term < 1
    ratio = ratio_from_bounds(gamma, alpha) if informative else math.nan
    return RatioBounds(n, s, lambda2, gamma, alpha, ratio, informative)


def ratio_bounds(sys: GroundedSystem, settings: SolverSettings | None = None) -> RatioBounds:
    return ratio_bounds_from_lambda2(sys.n, sys.s, lambda2_follower_subgraph(sys, settings))
