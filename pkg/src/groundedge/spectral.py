"""Grounded Laplacian operators and their smallest eigenpairs."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .graph import Graph, is_connected

logger = logging.getLogger(__name__)


class ConvergenceError(RuntimeError):
    """Iterative eigensolver hit ``max_iterations``; ``best`` holds the best iterate."""

    def __init__(self, message, best: "EigenPair | None" = None):
        super().__init__(message)
        self.best = best


class DisconnectedFollowersError(ValueError):
    pass


@dataclass(frozen=True)
class SolverSettings:
    """Eigensolver knobs.

    ``dense_threshold`` is the largest system dimension solved by a full
    symmetric eigendecomposition; larger systems use inverse power
    iteration with preconditioned conjugate gradients.  ``"auto"`` builds
    a smoothed-aggregation hierarchy and falls back to Jacobi when its
    operator complexity exceeds ``max_operator_complexity`` (expander-like
    graphs coarsen badly).
    """

    epsilon: float = 1e-3
    max_iterations: int = 2000
    dense_threshold: int = 2048
    cg_tolerance: float = 1e-10
    preconditioner: str = "auto"
    seed: int = 0
    max_operator_complexity: float = 3.0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.dense_threshold < 1:
            raise ValueError("dense_threshold must be >= 1")
        if self.preconditioner not in ("auto", "amg", "jacobi"):
            raise ValueError(f"unknown preconditioner {self.preconditioner!r}")


@dataclass(frozen=True)
class EigenPair:
    eigenvalue: float
    vector: np.ndarray = field(repr=False)
    residual_norm: float
    iterations: int = 0
    method: str = "dense"


@dataclass(frozen=True, eq=False)
class GroundedSystem:
    """A graph, its grounded node set ``S`` and added edges ``T``.

    Added edges are stored as ``(t, i)`` with ``t`` grounded and ``i`` not;
    each must be absent from the graph.  ``matrix`` is the grounded
    Laplacian of ``G(T)`` restricted to the non-grounded nodes, ordered by
    node id.
    """

    graph: Graph
    grounded: tuple[int, ...]
    added: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        g = self.graph
        S = tuple(sorted({int(s) for s in self.grounded}))
        if not S:
            raise ValueError("grounded set must be non-empty")
        if S[0] < 0 or S[-1] >= g.n:
            raise ValueError("grounded node id out of range")
        if len(S) >= g.n:
            raise ValueError("at least one node must remain non-grounded")
        object.__setattr__(self, "grounded", S)
        Sset = set(S)
        norm = []
        for u, v in self.added:
            u, v = int(u), int(v)
            if u in Sset and v not in Sset:
                t, i = u, v
            elif v in Sset and u not in Sset:
                t, i = v, u
            else:
                raise ValueError(f"added edge ({u}, {v}) must join a grounded and a non-grounded node")
            if g.has_edge(t, i):
                raise ValueError(f"added edge ({t}, {i}) already exists in the graph")
            norm.append((t, i))
        if len(set(norm)) != len(norm):
            raise ValueError("duplicate added edge")
        object.__setattr__(self, "added", tuple(norm))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def s(self) -> int:
        return len(self.grounded)

    @property
    def dim(self) -> int:
        return self.graph.n - len(self.grounded)

    @cached_property
    def is_grounded(self) -> np.ndarray:
        mask = np.zeros(self.graph.n, dtype=bool)
        mask[list(self.grounded)] = True
        return mask

    @cached_property
    def free(self) -> np.ndarray:
        """Non-grounded node ids, ascending; position in this array is the matrix index."""
        return np.flatnonzero(~self.is_grounded)

    @cached_property
    def position(self) -> np.ndarray:
        pos = np.full(self.graph.n, -1, dtype=np.int64)
        pos[self.free] = np.arange(self.dim)
        return pos

    @cached_property
    def added_count(self) -> np.ndarray:
        """Number of added edges at each non-grounded node (matrix order)."""
        cnt = np.zeros(self.dim)
        for _, i in self.added:
            cnt[self.position[i]] += 1
        return cnt

    @cached_property
    def follower_adjacency(self) -> sp.csr_matrix:
        """Adjacency of ``G[V \\ S]`` in matrix order."""
        A = self.graph.adjacency[self.free][:, self.free].tocsr()
        A.sort_indices()
        return A

    @cached_property
    def diagonal(self) -> np.ndarray:
        return self.graph.degrees[self.free].astype(float) + self.added_count

    @cached_property
    def matrix(self) -> sp.csr_matrix:
        M = (sp.diags(self.diagonal) - self.follower_adjacency).tocsr()
        M.sort_indices()
        return M

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def with_edges(self, edges: Iterable[Sequence[int]]) -> "GroundedSystem":
        return GroundedSystem(self.graph, self.grounded, self.added + tuple(tuple(e) for e in edges))

    def __repr__(self):
        return f"GroundedSystem(n={self.n}, s={self.s}, |T|={len(self.added)})"


def apply_operator(sys: GroundedSystem, x: np.ndarray) -> np.ndarray:
    """``L_{-S}(T) @ x`` using the sparse operator."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != sys.dim:
        raise ValueError(f"vector has length {x.shape[0]}, system dimension is {sys.dim}")
    return sys.matrix @ x


def _finish(A, u, iterations, method) -> EigenPair:
    u = u / np.linalg.norm(u)
    if u.sum() < 0:
        u = -u
    Au = A @ u
    lam = float(u @ Au)
    res = float(np.linalg.norm(Au - lam * u))
    return EigenPair(lam, u, res, iterations, method)


def _dense_smallest(A: np.ndarray) -> np.ndarray:
    _, V = scipy.linalg.eigh(A, subset_by_index=[0, 0])
    return V[:, 0]


def build_preconditioner(A: sp.csr_matrix, settings: SolverSettings):
    """CG preconditioner for ``A``; stays valid after small diagonal increases."""
    kind = settings.preconditioner
    if kind in ("amg", "auto"):
        import pyamg

        ml = pyamg.smoothed_aggregation_solver(A, symmetry="hermitian", max_coarse=200)
        if kind == "amg" or ml.operator_complexity() <= settings.max_operator_complexity:
            return ml.aspreconditioner(cycle="V")
        logger.debug("AMG operator complexity %.1f, using Jacobi", ml.operator_complexity())
    d = A.diagonal()
    return spla.LinearOperator(A.shape, matvec=lambda x: x / d, dtype=float)


def _cg(A, b, x0, M, tol):
    x, info = spla.cg(A, b, x0=x0, rtol=tol, atol=0.0, maxiter=10 * A.shape[0], M=M)
    if info > 0:
        logger.debug("cg stopped after %d iterations without reaching rtol=%g", info, tol)
    return x


def inverse_iteration(A: sp.csr_matrix, settings: SolverSettings,
                      x0: np.ndarray | None = None, M=None) -> EigenPair:
    """Smallest eigenpair of a sparse SPD matrix by inverse power iteration.

    Each sweep solves ``A y = x`` by preconditioned CG.  Stops once the
    Rayleigh quotient changes by less than ``epsilon / 4`` (relative) and
    the residual is at most ``epsilon * lambda``.  ``M`` overrides the
    preconditioner built from ``settings``.
    """
    n = A.shape[0]
    eps = settings.epsilon
    if x0 is None:
        rng = np.random.default_rng(settings.seed)
        x = np.ones(n) / np.sqrt(n) + 1e-4 * rng.uniform(-1.0, 1.0, n)
    else:
        x = np.asarray(x0, dtype=float).copy()
        if x.sum() < 0:
            x = -x
    x /= np.linalg.norm(x)
    if M is None:
        M = build_preconditioner(A, settings)
    Ax = A @ x
    lam_prev = float(x @ Ax)
    best = _finish(A, x, 0, "inverse-iteration")
    for it in range(1, settings.max_iterations + 1):
        y = _cg(A, x, x / lam_prev, M, settings.cg_tolerance)
        x = y / np.linalg.norm(y)
        Ax = A @ x
        lam = float(x @ Ax)
        res = float(np.linalg.norm(Ax - lam * x))
        if res / lam < best.residual_norm / max(best.eigenvalue, 1e-300):
            best = EigenPair(lam, x, res, it, "inverse-iteration")
        if abs(lam - lam_prev) <= 0.25 * eps * lam and res <= eps * lam:
            logger.debug("inverse iteration converged in %d sweeps (n=%d)", it, n)
            return _finish(A, x, it, "inverse-iteration")
        lam_prev = lam
    raise ConvergenceError(
        f"inverse iteration did not converge in {settings.max_iterations} sweeps "
        f"(best residual {best.residual_norm:.3g})", best)


def smallest_eigenpair(sys: GroundedSystem, settings: SolverSettings | None = None,
                       x0: np.ndarray | None = None, M=None) -> EigenPair:
    """Smallest eigenpair of ``L_{-S}(T)``.

    Dense decomposition when ``sys.dim <= settings.dense_threshold``,
    inverse iteration otherwise.  ``x0`` warm-starts the iterative path.
    ``M`` reuses a preconditioner from :func:`preconditioner_for`.  The
    returned vector is unit length with non-negative entry sum.
    """
    settings = settings or SolverSettings()
    if sys.dim < 1:
        raise ValueError("system has dimension zero")
    A = sys.matrix
    if sys.dim <= settings.dense_threshold:
        return _finish(A, _dense_smallest(A.toarray()), 1, "dense")
    return inverse_iteration(A, settings, x0, M)


def preconditioner_for(sys: GroundedSystem, settings: SolverSettings):
    """Preconditioner to share across a sequence of edge additions, or None on the dense path."""
    if sys.dim <= settings.dense_threshold:
        return None
    return build_preconditioner(sys.matrix, settings)


def smallest_eigenvalue_dense(M: np.ndarray) -> float:
    return float(scipy.linalg.eigh(M, eigvals_only=True, subset_by_index=[0, 0])[0])


def lambda2_follower_subgraph(sys: GroundedSystem, settings: SolverSettings | None = None) -> float:
    """Algebraic connectivity of ``G[V \\ S]``.

    Raises :class:`DisconnectedFollowersError` when the follower subgraph
    is disconnected, since the ratio bounds need it connected.
    """
    settings = settings or SolverSettings()
    if not is_connected(sys.graph, sys.free):
        raise DisconnectedFollowersError("bounds valid only when G[V\\S] is connected")
    p = sys.dim
    if p == 1:
        raise DisconnectedFollowersError("follower subgraph has a single node; lambda_2 undefined")
    A = sys.follower_adjacency
    L = (sp.diags(np.asarray(A.sum(axis=1)).ravel()) - A).tocsr()
    if p <= settings.dense_threshold:
        return float(scipy.linalg.eigh(L.toarray(), eigvals_only=True, subset_by_index=[1, 1])[0])
    return _deflated_inverse_iteration(L, settings)


def _deflated_inverse_iteration(L: sp.csr_matrix, settings: SolverSettings) -> float:
    p = L.shape[0]
    eps = settings.epsilon
    rng = np.random.default_rng(settings.seed)
    x = rng.standard_normal(p)
    x -= x.mean()
    x /= np.linalg.norm(x)
    M = build_preconditioner(L, settings)
    lam_prev = float(x @ (L @ x))
    for it in range(1, settings.max_iterations + 1):
        y = _cg(L, x, x / lam_prev, M, settings.cg_tolerance)
        y -= y.mean()
        x = y / np.linalg.norm(y)
        Lx = L @ x
        lam = float(x @ Lx)
        res = float(np.linalg.norm(Lx - lam * x))
        if abs(lam - lam_prev) <= 0.25 * eps * lam and res <= eps * lam:
            return lam
        lam_prev = lam
    raise ConvergenceError(f"deflated inverse iteration did not converge in {settings.max_iterations} sweeps")


def check_degree_lower_bound(sys: GroundedSystem, pair: EigenPair, epsilon: float = 1e-3) -> bool:
    """True iff every non-grounded diagonal entry is at least ``lambda`` (up to ``epsilon``)."""
    return bool(sys.diagonal.min() >= pair.eigenvalue - epsilon * pair.eigenvalue)
