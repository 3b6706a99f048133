import numpy as np
import pytest
from hypothesis import strategies as st

from groundedge import Graph


def random_connected_graph(rng, n, p=0.3):
    """Random spanning tree plus independent extra edges."""
    perm = rng.permutation(n)
    edges = {tuple(sorted((int(perm[i]), int(perm[rng.integers(i)])))) for i in range(1, n)}
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    return Graph.from_edges(sorted(edges), n=n)


def dense_laplacian(g, extra=()):
    L = np.zeros((g.n, g.n))
    for u, v in list(g.edges()) + list(extra):
        L[u, u] += 1
        L[v, v] += 1
        L[u, v] -= 1
        L[v, u] -= 1
    return L


def grounded_lambda_oracle(g, grounded, extra=()):
    """Smallest eigenvalue by explicit dense assembly and deletion."""
    L = dense_laplacian(g, extra)
    keep = [i for i in range(g.n) if i not in set(grounded)]
    return float(np.linalg.eigvalsh(L[np.ix_(keep, keep)])[0])


@st.composite
def grounded_instances(draw, max_n=12, max_s=3):
    n = draw(st.integers(3, max_n))
    seed = draw(st.integers(0, 2**31 - 1))
    p = draw(st.floats(0.0, 0.6))
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, n, p)
    s = draw(st.integers(1, min(max_s, n - 1)))
    grounded = tuple(sorted(rng.choice(n, size=s, replace=False).tolist()))
    return g, grounded


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def path8():
    return Graph.from_edges([(i, i + 1) for i in range(7)])


@pytest.fixture
def fig1():
    return Graph.from_edges([(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)])


ACCEPTANCE_LINES = []


def record_acceptance(criterion, passed, detail):
    line = f"[{criterion}] {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
