import numpy as np
import pytest

from bifurcate.graph import Graph


def complete(n, w=1.0):
    return Graph(w * (np.ones((n, n)) - np.eye(n)))


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(n):
    return Graph.from_edges(n, [(0, i) for i in range(1, n)])


def random_graph(n, p, seed, weighted=False, connected=False):
    rng = np.random.default_rng(seed)
    while True:
        W = np.triu(rng.random((n, n)) < p, 1).astype(float)
        if weighted:
            W *= rng.uniform(0.5, 3.0, size=W.shape)
        g = Graph(W + W.T)
        if not connected:
            return g
        from bifurcate.graph import connected_components

        if len(connected_components(g)) == 1:
            return g


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
