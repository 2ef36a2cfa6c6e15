"""Undirected binary graphs and their normalized operators."""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    DuplicateEdgeError,
    IndexOutOfRangeError,
    IsolatedNodeError,
    SelfLoopError,
)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes ``0..num_nodes-1``.

    ``edges`` is an ``(E, 2)`` integer array of canonical pairs ``i < j``
    sorted lexicographically, so two graphs built from the same edge set in
    different order compare equal field by field.
    """

    num_nodes: int
    edges: np.ndarray
    degree: np.ndarray = field(repr=False)

    @property
    def num_edges(self):
        return int(self.edges.shape[0])

    def adjacency(self):
        """Dense symmetric 0/1 adjacency matrix."""
        A = np.zeros((self.num_nodes, self.num_nodes))
        i, j = self.edges[:, 0], self.edges[:, 1]
        A[i, j] = 1.0
        A[j, i] = 1.0
        return A

    def edge_set(self):
        return {(int(i), int(j)) for i, j in self.edges}


def build_graph(num_nodes, edge_list):
    """Validate an edge list and build a :class:`Graph`.

    Raises :class:`SelfLoopError`, :class:`DuplicateEdgeError` (including the
    reversed pair) or :class:`IndexOutOfRangeError`, naming the first
    offending edge in input order.
    """
    num_nodes = int(num_nodes)
    if num_nodes < 1:
        raise ValueError(f"num_nodes must be >= 1, got {num_nodes}")

    seen = set()
    for edge in edge_list:
        i, j = (int(v) for v in edge)
        for v in (i, j):
            if not 0 <= v < num_nodes:
                raise IndexOutOfRangeError(v, (i, j), num_nodes)
        if i == j:
            raise SelfLoopError(i)
        key = (i, j) if i < j else (j, i)
        if key in seen:
            raise DuplicateEdgeError(i, j)
        seen.add(key)

    edges = np.array(sorted(seen), dtype=np.int64).reshape(-1, 2)
    degree = np.bincount(edges.ravel(), minlength=num_nodes).astype(np.int64)
    edges.setflags(write=False)
    degree.setflags(write=False)
    return Graph(num_nodes, edges, degree)


def graph_from_adjacency(A):
    """Build a :class:`Graph` from a dense symmetric 0/1 adjacency matrix."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {A.shape}")
    if not np.array_equal(A, A.T):
        raise ValueError("adjacency must be symmetric")
    if not np.isin(A, (0, 1)).all():
        raise ValueError("adjacency entries must be 0 or 1")
    diag = np.flatnonzero(np.diag(A))
    if diag.size:
        raise SelfLoopError(int(diag[0]))
    i, j = np.nonzero(np.triu(A, 1))
    return build_graph(A.shape[0], zip(i.tolist(), j.tolist()))


def as_graph(graph):
    if isinstance(graph, Graph):
        return graph
    return graph_from_adjacency(graph)


def _inv_sqrt_degree(g):
    zero = np.flatnonzero(g.degree == 0)
    if zero.size:
        raise IsolatedNodeError(int(zero[0]))
    return 1.0 / np.sqrt(g.degree.astype(np.float64))


def normalized_adjacency(g):
    """``D^{-1/2} A D^{-1/2}`` as a dense, exactly symmetric matrix."""
    r = _inv_sqrt_degree(g)
    A_hat = np.zeros((g.num_nodes, g.num_nodes))
    i, j = g.edges[:, 0], g.edges[:, 1]
    w = r[i] * r[j]
    A_hat[i, j] = w
    A_hat[j, i] = w
    return A_hat


def normalized_laplacian(g):
    """``I - D^{-1/2} A D^{-1/2}``."""
    L = -normalized_adjacency(g)
    L[np.diag_indices(g.num_nodes)] += 1.0
    return L
