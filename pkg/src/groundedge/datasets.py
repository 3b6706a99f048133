"""Bundled fixture graphs.

Small fixtures (exhaustively solvable with one grounded node and k <= 5)
and mid-size fixtures (a few thousand nodes).  ``tools/make_fixtures.py``
regenerates the files.
"""

from importlib import resources
from pathlib import Path

from .graph import Graph, largest_connected_component, load_edge_list

DATASETS = {
    "fig1": "five-node example graph, grounded node 0 in the worked example",
    "path8": "path graph on 8 nodes",
    "karate": "Zachary karate club, 34 nodes / 78 edges",
    "florentine": "Padgett Florentine families marriages, 15 nodes / 20 edges",
    "southern_women": "Davis southern women attendance (bipartite), 32 nodes / 89 edges",
    "social30": "synthetic Holme-Kim social graph, 30 nodes / 81 edges",
    "minnesota": "Minnesota road network, 2642 nodes / 3303 edges (LCC 2640 / 3302)",
    "powergrid": "synthetic power-grid-like graph, 2000 nodes / 2660 edges",
    "powergrid_dense": "synthetic power-grid-like graph, 2400 nodes / 3744 edges",
    "mesh": "synthetic Delaunay mesh, 1500 nodes / 4475 edges",
    "circuit": "synthetic sparse scale-free graph, 2000 nodes / 3996 edges",
    "web": "synthetic clustered scale-free graph, 1500 nodes / 5981 edges",
}

SMALL = ("karate", "florentine", "southern_women", "social30")
MIDSIZE = ("minnesota", "powergrid", "powergrid_dense", "mesh", "circuit", "web")


def dataset_path(name: str) -> Path:
    if name not in DATASETS:
        raise KeyError(f"unknown dataset {name!r}; choose from {sorted(DATASETS)}")
    return Path(str(resources.files("groundedge") / "data" / f"{name}.txt"))


def load_dataset(name: str, lcc: bool = True) -> Graph:
    g = load_edge_list(dataset_path(name))
    if lcc:
        g, _ = largest_connected_component(g)
    return g
