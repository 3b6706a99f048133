import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings

from groundedge import Graph
from groundedge.baselines import (
    BASELINES,
    betweenness_centrality,
    closeness_centrality,
    degree_baseline,
    degree_centrality,
    eigen_approx_baseline,
    eigenvector_centrality,
    kcenter_baseline,
    rank_nodes,
)
from groundedge.graph import bfs_distances
from groundedge.optimize import SaturatedError, build_candidates, greedy_fast
from groundedge.spectral import GroundedSystem

from conftest import grounded_instances, random_connected_graph

# grounded 0; node 5 is a high-u pendant whose neighbour sum is small
WITNESS_EDGES = [(0, 4), (0, 6), (1, 2), (1, 4), (1, 6), (2, 3), (2, 4), (3, 5), (3, 6), (4, 6)]


def to_nx(g):
    G = nx.Graph(g.edges())
    G.add_nodes_from(range(g.n))
    return G


@pytest.mark.parametrize("seed", range(5))
def test_betweenness_matches_networkx(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, 40, p=0.08)
    want = nx.betweenness_centrality(to_nx(g), normalized=False)
    got = betweenness_centrality(g, batch=7).per_node
    assert np.allclose(got, [want[v] for v in range(g.n)])


def test_betweenness_path():
    g = Graph.from_edges([(i, i + 1) for i in range(4)])
    assert list(betweenness_centrality(g).per_node) == [0, 3, 4, 3, 0]


def test_closeness_matches_networkx():
    g = random_connected_graph(np.random.default_rng(9), 50, p=0.05)
    want = nx.closeness_centrality(to_nx(g))
    assert np.allclose(closeness_centrality(g).per_node, [want[v] for v in range(g.n)])


def test_closeness_needs_connected_graph():
    with pytest.raises(ValueError):
        closeness_centrality(Graph.from_edges([(0, 1)], n=3))


def test_eigenvector_matches_networkx():
    g = random_connected_graph(np.random.default_rng(10), 40, p=0.1)
    want = nx.eigenvector_centrality_numpy(to_nx(g))
    got = eigenvector_centrality(g)
    assert got.converged
    assert np.allclose(got.per_node, [abs(want[v]) for v in range(g.n)], atol=1e-6)


def test_eigenvector_bipartite_converges():
    g = Graph.from_edges([(i, i + 1) for i in range(9)])  # bipartite path
    assert eigenvector_centrality(g).converged


def test_rank_nodes_ties_by_id():
    assert list(rank_nodes(np.array([1.0, 3.0, 3.0, 2.0]))) == [1, 2, 3, 0]


def test_degree_baseline_path8(path8):
    res = degree_baseline(GroundedSystem(path8, (0,)), 1)
    assert res.edges == [(0, 2)]
    assert res.final_lambda == pytest.approx(0.0644, abs=1e-3)


def test_ranking_skips_nodes_adjacent_to_all_grounded():
    # node 1 has top degree but touches both grounded nodes
    g = Graph.from_edges([(0, 1), (1, 5), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5), (5, 6)])
    g = g.add_edges([(1, 6)])
    res = degree_baseline(GroundedSystem(g, (0, 6)), 1)
    assert 1 not in res.edges[0]


def test_ranking_attaches_via_lowest_free_grounded():
    g = Graph.from_edges([(0, 2), (2, 3), (3, 1)])
    res = degree_baseline(GroundedSystem(g, (0, 1)), 2)
    assert res.edges == [(1, 2), (0, 3)]


def test_kcenter_path8(path8):
    res = kcenter_baseline(GroundedSystem(path8, (0,)), 1)
    assert res.edges == [(0, 5)]
    new = path8.add_edges(res.edges)
    assert bfs_distances(new, [0]).max() == 3


@settings(max_examples=30, deadline=None)
@given(grounded_instances(max_n=14))
def test_kcenter_minimises_eccentricity(inst):
    g, S = inst
    sys = GroundedSystem(g, S)
    cands = build_candidates(sys, allow_empty=True).edges
    if not cands:
        return
    best = min(bfs_distances(g.add_edges([e]), S).max() for e in cands)
    res = kcenter_baseline(sys, 1)
    assert bfs_distances(g.add_edges(res.edges), S).max() == best


def test_kcenter_far_pendant_first():
    # long tail ending in a pendant at node 9
    g = Graph.from_edges([(0, 1), (1, 2), (2, 3), (1, 3)] + [(i, i + 1) for i in range(3, 9)])
    res = kcenter_baseline(GroundedSystem(g, (0,)), 1)
    assert res.edges[0][1] in (6, 7)
    assert bfs_distances(g.add_edges(res.edges), [0]).max() == 3


def test_eigenapprox_path8(path8):
    assert eigen_approx_baseline(GroundedSystem(path8, (0,)), 1).edges == [(0, 7)]


def test_eigenapprox_differs_from_fast_on_witness():
    sys = GroundedSystem(Graph.from_edges(WITNESS_EDGES), (0,))
    assert eigen_approx_baseline(sys, 1).edges == [(0, 5)]
    assert greedy_fast(sys, 1).edges == [(0, 3)]


def test_baselines_on_saturated_star():
    star = Graph.from_edges([(0, i) for i in range(1, 6)])
    for fn in BASELINES.values():
        with pytest.raises((SaturatedError, ValueError)):
            fn(GroundedSystem(star, (0,)), 1)


@settings(max_examples=25, deadline=None)
@given(grounded_instances(max_n=16))
def test_baselines_feasible_and_monotone(inst):
    g, S = inst
    sys = GroundedSystem(g, S)
    cands = set(build_candidates(sys, allow_empty=True).edges)
    k = min(3, len(cands))
    if k == 0:
        return
    for name, fn in BASELINES.items():
        try:
            res = fn(sys, k)
        except ValueError:
            # ranking baselines may run out of eligible nodes before k
            assert name in ("degree", "eigenvector", "betweenness", "closeness")
            continue
        assert len(set(res.edges)) == k and set(res.edges) <= cands
        lam = np.concatenate([[res.initial_lambda], res.lambdas])
        assert (np.diff(lam) >= -2e-3 * lam[:-1]).all()


def test_degree_scores():
    g = Graph.from_edges([(0, 1), (0, 2)])
    assert list(degree_centrality(g).per_node) == [2, 1, 1]
