import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings

from groundedge import Graph
from groundedge.spectral import (
    ConvergenceError,
    DisconnectedFollowersError,
    GroundedSystem,
    SolverSettings,
    apply_operator,
    check_degree_lower_bound,
    inverse_iteration,
    lambda2_follower_subgraph,
    smallest_eigenpair,
)

from conftest import dense_laplacian, grounded_instances, grounded_lambda_oracle, random_connected_graph

ITERATIVE = SolverSettings(dense_threshold=1, epsilon=1e-6)


def test_matrix_is_deleted_laplacian(fig1):
    sys = GroundedSystem(fig1, (0,), added=[(0, 3)])
    L = dense_laplacian(fig1, [(0, 3)])
    assert np.allclose(sys.dense(), L[1:, 1:])


def test_added_edge_only_raises_diagonal(path8):
    base = GroundedSystem(path8, (0,))
    aug = base.with_edges([(5, 0)])
    assert aug.added == ((0, 5),)
    diff = aug.dense() - base.dense()
    assert diff[base.position[5], base.position[5]] == 1
    assert np.count_nonzero(diff) == 1


@pytest.mark.parametrize("added", [[(1, 2)], [(0, 1)], [(2, 0), (0, 2)]])
def test_invalid_added_edges(path8, added):
    with pytest.raises(ValueError):
        GroundedSystem(path8, (0,), added=added)


def test_grounded_set_validation(path8):
    with pytest.raises(ValueError):
        GroundedSystem(path8, ())
    with pytest.raises(ValueError):
        GroundedSystem(path8, tuple(range(8)))
    with pytest.raises(ValueError):
        GroundedSystem(path8, (9,))
    assert GroundedSystem(path8, (3, 1, 3)).grounded == (1, 3)


def test_apply_operator(fig1):
    sys = GroundedSystem(fig1, (0,))
    x = np.arange(4.0)
    assert np.allclose(apply_operator(sys, x), sys.dense() @ x)
    with pytest.raises(ValueError):
        apply_operator(sys, np.ones(5))


def test_path8_value(path8):
    assert smallest_eigenpair(GroundedSystem(path8, (0,))).eigenvalue == pytest.approx(
        2 - 2 * np.cos(np.pi / 15), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(grounded_instances())
def test_dense_matches_oracle(inst):
    g, S = inst
    pair = smallest_eigenpair(GroundedSystem(g, S))
    assert pair.eigenvalue == pytest.approx(grounded_lambda_oracle(g, S), abs=1e-10)
    assert np.linalg.norm(pair.vector) == pytest.approx(1.0)
    assert pair.vector.sum() >= 0


@pytest.mark.parametrize("precond", ["amg", "jacobi"])
@pytest.mark.parametrize("seed", range(4))
def test_iterative_matches_dense(seed, precond):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, 300, p=0.01)
    sys = GroundedSystem(g, tuple(rng.choice(300, 3, replace=False).tolist()))
    dense = smallest_eigenpair(sys)
    it = smallest_eigenpair(sys, SolverSettings(dense_threshold=1, epsilon=1e-6, preconditioner=precond))
    assert it.method == "inverse-iteration"
    assert it.eigenvalue == pytest.approx(dense.eigenvalue, rel=2e-6)
    assert abs(it.vector @ dense.vector) == pytest.approx(1.0, abs=1e-4)


def test_warm_start_needs_fewer_sweeps():
    rng = np.random.default_rng(3)
    g = random_connected_graph(rng, 400, p=0.005)
    sys = GroundedSystem(g, (0,))
    cold = smallest_eigenpair(sys, ITERATIVE)
    warm = smallest_eigenpair(sys.with_edges([(0, int(sys.free[-1]))]), ITERATIVE, x0=cold.vector)
    assert warm.iterations <= cold.iterations


def test_convergence_error_carries_best_iterate(path8):
    sys = GroundedSystem(path8, (0,))
    with pytest.raises(ConvergenceError) as info:
        inverse_iteration(sys.matrix, SolverSettings(max_iterations=1, epsilon=1e-14))
    assert info.value.best is not None


def test_settings_validation():
    with pytest.raises(ValueError):
        SolverSettings(epsilon=0)
    with pytest.raises(ValueError):
        SolverSettings(preconditioner="ilu")


def test_eigenvector_positive_when_followers_connected():
    rng = np.random.default_rng(5)
    for _ in range(20):
        g = random_connected_graph(rng, 20, p=0.15)
        sys = GroundedSystem(g, (0,))
        if not nx.is_connected(nx.Graph(g.edges()).subgraph(sys.free.tolist())):
            continue
        assert (smallest_eigenpair(sys).vector > 0).all()


def test_lambda2_matches_networkx():
    g = random_connected_graph(np.random.default_rng(7), 25, p=0.2)
    sys = GroundedSystem(g, (0,))
    G = nx.Graph(g.edges()).subgraph(range(1, 25))
    assert nx.is_connected(G)
    want = nx.algebraic_connectivity(G, method="lanczos", tol=1e-12)
    assert lambda2_follower_subgraph(sys) == pytest.approx(want, rel=1e-8)
    assert lambda2_follower_subgraph(sys, SolverSettings(dense_threshold=1, epsilon=1e-8)) == pytest.approx(
        want, rel=1e-5)


def test_lambda2_complete_graph():
    K = Graph.from_edges([(u, v) for u in range(10) for v in range(u + 1, 10)])
    assert lambda2_follower_subgraph(GroundedSystem(K, (0,))) == pytest.approx(9.0)


def test_lambda2_disconnected_followers(path8):
    with pytest.raises(DisconnectedFollowersError):
        lambda2_follower_subgraph(GroundedSystem(path8, (3,)))


@settings(max_examples=40, deadline=None)
@given(grounded_instances())
def test_degree_lower_bound(inst):
    g, S = inst
    sys = GroundedSystem(g, S)
    assert check_degree_lower_bound(sys, smallest_eigenpair(sys))
