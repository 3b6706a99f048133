"""Regenerate the bundled fixture edge lists under src/groundedge/data.

Real networks come from networkx (Karate, Florentine families, Southern
women) and from the PyGSP source distribution (Minnesota road network,
``minnesota.mat``).  The synthetic mid-size graphs are seeded, so running
this script twice yields identical files.

    python tools/make_fixtures.py [--minnesota PATH/TO/minnesota.mat]
"""

import argparse
from pathlib import Path

import networkx as nx
import numpy as np
import scipy.io
import scipy.sparse as sp
from scipy.sparse.csgraph import minimum_spanning_tree
from scipy.spatial import Delaunay

DATA = Path(__file__).resolve().parents[1] / "src" / "groundedge" / "data"


def write(name, edges, header):
    edges = sorted({(min(u, v), max(u, v)) for u, v in edges if u != v})
    with open(DATA / f"{name}.txt", "w", encoding="utf-8") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")
    nodes = {x for e in edges for x in e}
    print(f"{name}: {len(nodes)} nodes, {len(edges)} edges")


def relabel_sorted(G):
    order = sorted(G.nodes(), key=str)
    index = {v: i for i, v in enumerate(order)}
    return [(index[u], index[v]) for u, v in G.edges()], order


def geometric_grid(n, edge_ratio, seed):
    """Euclidean MST of random points plus the shortest extra Delaunay edges."""
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    tri = Delaunay(pts)
    cand = set()
    for a, b, c in tri.simplices:
        for u, v in ((a, b), (b, c), (a, c)):
            cand.add((min(u, v), max(u, v)))
    cand = np.array(sorted(cand))
    w = np.linalg.norm(pts[cand[:, 0]] - pts[cand[:, 1]], axis=1)
    W = sp.coo_matrix((w, (cand[:, 0], cand[:, 1])), shape=(n, n)).tocsr()
    mst = minimum_spanning_tree(W).tocoo()
    tree = {(min(u, v), max(u, v)) for u, v in zip(mst.row, mst.col)}
    extra = [tuple(e) for e in cand[np.argsort(w, kind="stable")] if tuple(e) not in tree]
    need = int(round(edge_ratio * n)) - len(tree)
    return sorted(tree) + [(int(u), int(v)) for u, v in extra[:need]]


def delaunay_mesh(n, seed):
    rng = np.random.default_rng(seed)
    tri = Delaunay(rng.random((n, 2)))
    edges = set()
    for a, b, c in tri.simplices:
        for u, v in ((a, b), (b, c), (a, c)):
            edges.add((int(min(u, v)), int(max(u, v))))
    return sorted(edges)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--minnesota", default="/tmp/minnesota.mat")
    args = ap.parse_args()
    DATA.mkdir(parents=True, exist_ok=True)

    write("fig1", [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)],
          ["five-node example graph; node 0 is grounded in the worked example"])
    write("path8", [(i, i + 1) for i in range(7)], ["path graph on 8 nodes"])

    edges, _ = relabel_sorted(nx.karate_club_graph())
    write("karate", edges, ["Zachary karate club (34 nodes, 78 edges), via networkx"])
    edges, order = relabel_sorted(nx.florentine_families_graph())
    write("florentine", edges, ["Padgett Florentine families marriage network, via networkx",
                                "nodes relabelled alphabetically: " + ",".join(order)])
    edges, _ = relabel_sorted(nx.davis_southern_women_graph())
    write("southern_women", edges, ["Davis southern women bipartite attendance network, via networkx",
                                    "nodes relabelled by sorted name"])
    G = nx.powerlaw_cluster_graph(30, 3, 0.4, seed=7)
    write("social30", G.edges(), ["synthetic Holme-Kim graph, n=30, m=3, p=0.4, seed=7"])

    A = sp.triu(sp.csr_matrix(scipy.io.loadmat(args.minnesota)["A"]), k=1).tocoo()
    write("minnesota", zip(A.row.tolist(), A.col.tolist()),
          ["Minnesota road network (2642 nodes, 3303 edges), from PyGSP minnesota.mat"])

    write("powergrid", geometric_grid(2000, 1.33, seed=11),
          ["synthetic power-grid-like graph: Euclidean MST + shortest Delaunay chords",
           "n=2000, m/n=1.33, seed=11"])
    write("powergrid_dense", geometric_grid(2400, 1.56, seed=12),
          ["synthetic power-grid-like graph: Euclidean MST + shortest Delaunay chords",
           "n=2400, m/n=1.56, seed=12"])
    write("mesh", delaunay_mesh(1500, seed=13), ["synthetic Delaunay triangulation mesh, n=1500, seed=13"])
    write("circuit", nx.powerlaw_cluster_graph(2000, 2, 0.05, seed=14).edges(),
          ["synthetic sparse scale-free graph: Holme-Kim n=2000, m=2, p=0.05, seed=14"])
    write("web", nx.powerlaw_cluster_graph(1500, 4, 0.5, seed=15).edges(),
          ["synthetic clustered scale-free graph: Holme-Kim n=1500, m=4, p=0.5, seed=15"])


if __name__ == "__main__":
    main()
