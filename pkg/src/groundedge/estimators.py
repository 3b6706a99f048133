"""Scikit-learn style front end.

Each augmenter is fitted on a graph plus a grounded node set and learns
the ``k`` edges to add::

    aug = FastGreedyAugmenter(k=10).fit(graph, grounded=[0, 4])
    aug.edges_            # (k, 2) array of (grounded, non-grounded) ids
    aug.transform(graph)  # Graph with the edges added
"""

from __future__ import annotations

from typing import Callable

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .baselines import BASELINES
from .graph import Graph
from .optimize import RunResult, exhaustive_optimum, greedy_exact, greedy_fast
from .spectral import GroundedSystem, SolverSettings, smallest_eigenpair
from .validation import check_graph, check_grounded, check_k


def _run_exhaustive(sys, k, settings, cap):
    return exhaustive_optimum(sys, k, cap=cap)


def _run_greedy(sys, k, settings, cap):
    return greedy_exact(sys, k, settings)


def _run_fast(sys, k, settings, cap):
    return greedy_fast(sys, k, settings)


def _baseline_runner(fn):
    def run(sys, k, settings, cap):
        return fn(sys, k, settings)
    return run


# name -> callable(sys, k, settings, exhaustive_cap) -> RunResult
METHODS: dict[str, Callable[..., RunResult]] = {
    "exhaustive": _run_exhaustive,
    "greedy": _run_greedy,
    "fast": _run_fast,
    **{name: _baseline_runner(fn) for name, fn in BASELINES.items()},
}


class _Augmenter(TransformerMixin, BaseEstimator):
    """Shared fit/transform/score logic; subclasses implement ``_select``."""

    def _settings(self) -> SolverSettings:
        return SolverSettings(epsilon=self.epsilon, dense_threshold=self.dense_threshold,
                              preconditioner=self.preconditioner, seed=self.random_state)

    def _select(self, sys: GroundedSystem, k: int, settings: SolverSettings) -> RunResult:
        raise NotImplementedError

    def fit(self, X, y=None, grounded=None):
        """Choose ``k`` edges for graph ``X`` with grounded set ``grounded``.

        ``X`` may be a :class:`Graph`, an adjacency matrix, an ``(m, 2)``
        edge array or a networkx graph.
        """
        g = check_graph(X)
        S = check_grounded(g, grounded)
        k = check_k(self.k)
        sys = GroundedSystem(g, S)
        result = self._select(sys, k, self._settings())
        self.n_nodes_ = g.n
        self.grounded_ = np.array(S)
        self.result_ = result
        self.edges_ = np.array(result.edges, dtype=np.int64).reshape(-1, 2)
        self.lambdas_ = result.lambdas
        self.initial_lambda_ = result.initial_lambda
        self.lambda_ = result.final_lambda
        return self

    def transform(self, X) -> Graph:
        check_is_fitted(self, "edges_")
        g = check_graph(X)
        if g.n != self.n_nodes_:
            raise ValueError(f"fitted on {self.n_nodes_} nodes, got a graph with {g.n}")
        return g.add_edges(self.edges_)

    def score(self, X, y=None) -> float:
        """Smallest grounded Laplacian eigenvalue of ``X`` after adding the fitted edges."""
        g = self.transform(X)
        return smallest_eigenpair(GroundedSystem(g, tuple(self.grounded_)), self._settings()).eigenvalue

    def fit_transform(self, X, y=None, grounded=None):
        return self.fit(X, y, grounded=grounded).transform(X)


class ExhaustiveAugmenter(_Augmenter):
    """Optimal ``k``-edge set by enumerating every subset (small graphs only)."""

    def __init__(self, k=2, cap=10**6, epsilon=1e-3, dense_threshold=2048,
                 preconditioner="auto", random_state=0):
        self.k = k
        self.cap = cap
        self.epsilon = epsilon
        self.dense_threshold = dense_threshold
        self.preconditioner = preconditioner
        self.random_state = random_state

    def _select(self, sys, k, settings):
        return exhaustive_optimum(sys, k, cap=self.cap)


class GreedyAugmenter(_Augmenter):
    """Greedy selection by exact eigengain.

    ``strategy="secular"`` evaluates every candidate from one dense
    eigendecomposition per step via a rank-one update; ``"direct"``
    re-solves each augmented matrix.
    """

    def __init__(self, k=10, strategy="secular", epsilon=1e-3, dense_threshold=2048,
                 preconditioner="auto", random_state=0):
        self.k = k
        self.strategy = strategy
        self.epsilon = epsilon
        self.dense_threshold = dense_threshold
        self.preconditioner = preconditioner
        self.random_state = random_state

    def _select(self, sys, k, settings):
        return greedy_exact(sys, k, settings, strategy=self.strategy)


class FastGreedyAugmenter(_Augmenter):
    """Greedy selection by the first-order eigengain estimate."""

    def __init__(self, k=10, epsilon=1e-3, dense_threshold=2048,
                 preconditioner="auto", random_state=0):
        self.k = k
        self.epsilon = epsilon
        self.dense_threshold = dense_threshold
        self.preconditioner = preconditioner
        self.random_state = random_state

    def _select(self, sys, k, settings):
        return greedy_fast(sys, k, settings)


class BaselineAugmenter(_Augmenter):
    """One of the heuristic selectors in :data:`groundedge.baselines.BASELINES`."""

    def __init__(self, k=10, strategy="degree", epsilon=1e-3, dense_threshold=2048,
                 preconditioner="auto", random_state=0):
        self.k = k
        self.strategy = strategy
        self.epsilon = epsilon
        self.dense_threshold = dense_threshold
        self.preconditioner = preconditioner
        self.random_state = random_state

    def _select(self, sys, k, settings):
        if self.strategy not in BASELINES:
            raise ValueError(f"unknown strategy {self.strategy!r}; choose from {sorted(BASELINES)}")
        return BASELINES[self.strategy](sys, k, settings)
