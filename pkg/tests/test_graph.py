import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fairfilter import build_graph, normalized_adjacency, normalized_laplacian
from fairfilter.exceptions import (
    DuplicateEdgeError,
    IndexOutOfRangeError,
    IsolatedNodeError,
    SelfLoopError,
)
from fairfilter.graph import graph_from_adjacency

from conftest import random_graph


def test_single_edge(path2):
    assert path2.num_nodes == 2
    assert path2.degree.tolist() == [1, 1]


def test_triangle_degrees(triangle):
    assert triangle.degree.tolist() == [2, 2, 2]


def test_edge_order_irrelevant():
    a = build_graph(4, [(0, 1), (2, 3), (1, 2)])
    b = build_graph(4, [(3, 2), (1, 0), (2, 1)])
    assert np.array_equal(a.edges, b.edges)
    assert np.array_equal(a.degree, b.degree)


@pytest.mark.parametrize(
    "edges, exc, attr, value",
    [
        ([(0, 0)], SelfLoopError, "node", 0),
        ([(0, 1), (1, 0)], DuplicateEdgeError, "edge", (1, 0)),
        ([(0, 1), (0, 1)], DuplicateEdgeError, "edge", (0, 1)),
        ([(0, 5)], IndexOutOfRangeError, "index", 5),
        ([(-1, 0)], IndexOutOfRangeError, "index", -1),
    ],
)
def test_invalid_edges(edges, exc, attr, value):
    with pytest.raises(exc) as info:
        build_graph(2, edges)
    assert getattr(info.value, attr) == value


def test_num_nodes_must_be_positive():
    with pytest.raises(ValueError):
        build_graph(0, [])


def test_graph_is_immutable(triangle):
    with pytest.raises(ValueError):
        triangle.degree[0] = 5


def test_adjacency_roundtrip(triangle):
    A = triangle.adjacency()
    assert np.array_equal(A, A.T)
    assert np.array_equal(graph_from_adjacency(A).edges, triangle.edges)


def test_normalized_adjacency_path(path2):
    assert normalized_adjacency(path2).tolist() == [[0.0, 1.0], [1.0, 0.0]]


def test_normalized_adjacency_triangle(triangle):
    A_hat = normalized_adjacency(triangle)
    expected = np.full((3, 3), 0.5) - 0.5 * np.eye(3)
    np.testing.assert_allclose(A_hat, expected, atol=1e-15)


def test_normalized_adjacency_star(star4):
    A_hat = normalized_adjacency(star4)
    np.testing.assert_allclose(A_hat[0, 1:], 1 / np.sqrt(3), atol=1e-15)
    assert A_hat[0, 0] == 0.0


def test_laplacian_path(path2):
    assert normalized_laplacian(path2).tolist() == [[1.0, -1.0], [-1.0, 1.0]]


def test_laplacian_triangle(triangle):
    L = normalized_laplacian(triangle)
    np.testing.assert_allclose(np.diag(L), 1.0)
    np.testing.assert_allclose(L[~np.eye(3, dtype=bool)], -0.5)


def test_isolated_node_rejected():
    g = build_graph(3, [(0, 1)])
    with pytest.raises(IsolatedNodeError) as info:
        normalized_adjacency(g)
    assert info.value.node == 2
    with pytest.raises(IsolatedNodeError):
        normalized_laplacian(g)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 30), p=st.floats(0.05, 0.9), seed=st.integers(0, 2**31))
def test_operator_properties(n, p, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n, p)
    A_hat = normalized_adjacency(g)
    L = normalized_laplacian(g)
    assert np.max(np.abs(L + A_hat - np.eye(n))) <= 1e-12
    assert np.array_equal(A_hat, A_hat.T)
    assert np.array_equal(L, L.T)
    assert np.all(A_hat.sum(axis=1) <= np.sqrt(g.degree) + 1e-12)


def test_laplacian_psd(rng):
    for _ in range(10):
        g = random_graph(rng, int(rng.integers(3, 40)), 0.2)
        L = normalized_laplacian(g)
        x = rng.normal(size=(g.num_nodes, 100))
        x /= np.linalg.norm(x, axis=0)
        assert np.all(np.einsum("ij,ik,kj->j", x, L, x) >= -1e-9)
