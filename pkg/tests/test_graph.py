import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bifurcate.graph import Graph, GraphError, TemporalSequence, connected_components, laplacian, shortest_paths
from bifurcate.io import IngestionError, read_edgelist, write_edgelist
from bifurcate.spectral import eigvals_sym
from bifurcate.graph import zero_threshold

from conftest import complete, cycle, path, random_graph
from oracles import brute_path_counts


def test_graph_rejects_bad_weights():
    with pytest.raises(GraphError):
        Graph(np.array([[0, 1], [2, 0]]))
    with pytest.raises(GraphError):
        Graph(np.array([[1.0, 0], [0, 0]]))
    with pytest.raises(GraphError):
        Graph(np.array([[0, -1.0], [-1.0, 0]]))


def test_graph_is_immutable():
    g = complete(3)
    with pytest.raises(ValueError):
        g.weights[0, 1] = 5
    assert g.m == 3


def test_laplacian_examples():
    L = laplacian(complete(3)).L
    assert np.array_equal(np.diag(L), [2, 2, 2])
    assert np.all(L[~np.eye(3, dtype=bool)] == -1)
    w = 2.7
    lap = laplacian(Graph.from_edges(2, [(0, 1, w)]))
    assert np.array_equal(lap.L, [[w, -w], [-w, w]])
    assert np.array_equal(laplacian(Graph.empty(3)).L, np.zeros((3, 3)))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 50), p=st.floats(0, 0.3), seed=st.integers(0, 10**6))
def test_components_match_zero_eigenvalues(n, p, seed):
    g = random_graph(n, p, seed, weighted=True)
    lap = laplacian(g)
    assert np.all(np.abs(lap.L.sum(axis=1)) <= 1e-12)
    lam = eigvals_sym(lap.L)
    assert lam.min() >= -1e-10
    assert len(connected_components(g)) == int(np.sum(np.abs(lam) < zero_threshold(lam)))


@settings(max_examples=20, deadline=None)
@given(n=st.integers(2, 20), seed=st.integers(0, 10**6))
def test_laplacian_permutation_equivariant(n, seed):
    g = random_graph(n, 0.4, seed, weighted=True)
    perm = np.random.default_rng(seed).permutation(n)
    Lp = laplacian(g.permute(perm)).L
    # degree sums may differ in the last bit from summation order
    np.testing.assert_allclose(Lp, laplacian(g).L[np.ix_(perm, perm)], rtol=0, atol=1e-12)


def test_components_examples():
    assert connected_components(complete(3)) == [[0, 1, 2]]
    assert connected_components(Graph.from_edges(4, [(0, 1), (2, 3)])) == [[0, 1], [2, 3]]
    assert connected_components(Graph.empty(3)) == [[0], [1], [2]]


def test_shortest_paths_examples():
    sp = shortest_paths(path(3), 0)
    assert list(sp.distances) == [0, 1, 2] and sp.counts[2] == 1
    sp = shortest_paths(cycle(4), 0)
    assert sp.distances[2] == 2 and sp.counts[2] == 2
    assert sorted(sp.predecessors[2]) == [1, 3]
    sp = shortest_paths(Graph.from_edges(4, [(0, 1), (2, 3)]), 0)
    assert np.isinf(sp.distances[2]) and sp.counts[2] == 0


def test_shortest_paths_invweight():
    g = Graph.from_edges(3, [(0, 1, 4.0), (1, 2, 4.0), (0, 2, 2.0)])
    sp = shortest_paths(g, 0, "invweight")
    assert sp.distances[2] == pytest.approx(0.5)
    assert sp.counts[2] == 2
    assert shortest_paths(g, 0, "hop").distances[2] == 1


@pytest.mark.parametrize("metric", ["hop", "invweight"])
def test_path_counts_match_enumeration(metric):
    for seed in range(60):
        n = 3 + seed % 5
        g = random_graph(n, 0.5, seed, weighted=(metric == "invweight"))
        for s in range(n):
            sp = shortest_paths(g, s, metric)
            dist, counts = brute_path_counts(g, s, metric)
            np.testing.assert_allclose(sp.distances, dist, rtol=1e-12)
            np.testing.assert_array_equal(sp.counts, counts)


def test_temporal_sequence_invariants():
    with pytest.raises(GraphError):
        TemporalSequence((complete(3), complete(4)))
    with pytest.raises(GraphError):
        TemporalSequence((complete(3), complete(3)), (2, 1))
    seq = TemporalSequence((complete(3), path(3)))
    assert seq.timestamps == (1, 2) and seq.n == 3 and seq.T == 2


def test_edgelist_roundtrip(tmp_path):
    seq = TemporalSequence((complete(3, 2.5), path(3), Graph.empty(3)))
    f = tmp_path / "seq.txt"
    write_edgelist(seq, f)
    back = read_edgelist(f)
    assert back.T == 3 and all(a == b for a, b in zip(seq.graphs, back.graphs))


def test_edgelist_default_weight(tmp_path):
    f = tmp_path / "x.txt"
    f.write_text("# nodes=3 steps=1\n1 0 1\n1 1 2 2.5\n")
    g = read_edgelist(f).graphs[0]
    assert g.weights[0, 1] == 1.0 and g.weights[2, 1] == 2.5


@pytest.mark.parametrize(
    "body, line",
    [
        ("1 0 1\n1 1 0\n", 3),  # duplicate (undirected)
        ("1 0 0\n", 2),  # self loop
        ("1 0 1 -2\n", 2),  # negative weight
        ("1 0 1\nfoo bar\n", 3),  # malformed
        ("3 0 1\n", 2),  # step out of range
        ("1 0 7\n", 2),  # node out of range
    ],
)
def test_edgelist_errors_name_line(tmp_path, body, line):
    f = tmp_path / "bad.txt"
    f.write_text("# nodes=3 steps=2\n" + body)
    with pytest.raises(IngestionError) as exc:
        read_edgelist(f)
    assert exc.value.lineno == line
    assert f":{line}:" in str(exc.value)


def test_edgelist_requires_header(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("1 0 1\n")
    with pytest.raises(IngestionError):
        read_edgelist(f)
