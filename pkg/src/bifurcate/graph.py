"""Graph and temporal-sequence data model plus the shared traversal engine.

Graphs are dense, undirected and weighted. Instances are immutable: the
weight matrix is copied on construction and marked read-only.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Graph",
    "TemporalSequence",
    "LaplacianView",
    "ShortestPaths",
    "laplacian",
    "connected_components",
    "shortest_paths",
    "zero_threshold",
    "METRICS",
]

METRICS = ("hop", "invweight")
_TIE_RTOL = 1e-12


class GraphError(ValueError):
    """Raised when a weight matrix or edge list violates the graph invariants."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected weighted graph on nodes ``0..n-1``."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        W = np.array(self.weights, dtype=float, copy=True)
        if W.ndim != 2 or W.shape[0] != W.shape[1] or W.shape[0] < 1:
            raise GraphError(f"weight matrix must be square with n >= 1, got shape {W.shape}")
        if not np.all(np.isfinite(W)):
            raise GraphError("weight matrix contains non-finite entries")
        if np.any(W < 0):
            raise GraphError("negative edge weights are not allowed")
        if np.any(np.diag(W) != 0):
            raise GraphError("self-loops are not allowed (diagonal must be zero)")
        if not np.array_equal(W, W.T):
            raise GraphError("weight matrix must be symmetric")
        W.setflags(write=False)
        object.__setattr__(self, "weights", W)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[float]]) -> "Graph":
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples; ``w`` defaults to 1."""
        W = np.zeros((n, n))
        for e in edges:
            u, v = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            if u == v:
                raise GraphError(f"self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            W[u, v] = W[v, u] = w
        return cls(W)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(np.zeros((n, n)))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def m(self) -> int:
        return int(np.count_nonzero(np.triu(self.weights, 1) > 0))

    @property
    def adjacency(self) -> np.ndarray:
        """Binary edge-presence matrix."""
        return (self.weights > 0).astype(float)

    def neighbors(self) -> list[np.ndarray]:
        return [np.flatnonzero(row > 0) for row in self.weights]

    def edges(self) -> list[tuple[int, int, float]]:
        iu, ju = np.nonzero(np.triu(self.weights, 1))
        return [(int(i), int(j), float(self.weights[i, j])) for i, j in zip(iu, ju)]

    def permute(self, perm: Sequence[int]) -> "Graph":
        """Relabel so that new node ``k`` is old node ``perm[k]``."""
        p = np.asarray(perm)
        return Graph(self.weights[np.ix_(p, p)])

    def scale(self, alpha: float) -> "Graph":
        return Graph(alpha * self.weights)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and np.array_equal(self.weights, other.weights)

    def __hash__(self) -> int:
        return hash(self.weights.tobytes())

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class TemporalSequence:
    """Time-ordered graphs sharing one node set."""

    graphs: tuple[Graph, ...]
    timestamps: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        graphs = tuple(self.graphs)
        if not graphs:
            raise GraphError("a temporal sequence needs at least one graph")
        stamps = tuple(int(t) for t in self.timestamps) or tuple(range(1, len(graphs) + 1))
        if len(stamps) != len(graphs):
            raise GraphError("timestamps and graphs differ in length")
        if any(b <= a for a, b in zip(stamps, stamps[1:])):
            raise GraphError("timestamps must be strictly increasing")
        sizes = {g.n for g in graphs}
        if len(sizes) != 1:
            raise GraphError(f"all graphs must share the node set, got sizes {sorted(sizes)}")
        object.__setattr__(self, "graphs", graphs)
        object.__setattr__(self, "timestamps", stamps)

    @property
    def n(self) -> int:
        return self.graphs[0].n

    @property
    def T(self) -> int:
        return len(self.graphs)

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self):
        return iter(zip(self.timestamps, self.graphs))


@dataclass(frozen=True)
class LaplacianView:
    L: np.ndarray
    degrees: np.ndarray


def laplacian(g: Graph) -> LaplacianView:
    d = g.weights.sum(axis=1)
    L = np.diag(d) - g.weights
    L.setflags(write=False)
    d.setflags(write=False)
    return LaplacianView(L, d)


def zero_threshold(eigenvalues: np.ndarray) -> float:
    """Scale-aware cutoff below which an eigenvalue counts as zero."""
    lam_max = float(np.max(np.abs(eigenvalues))) if len(eigenvalues) else 0.0
    return 1e-8 * max(lam_max, 1.0)


def connected_components(g: Graph) -> list[list[int]]:
    """Blocks of nodes joined by positive-weight paths, ordered by smallest member."""
    nbrs = g.neighbors()
    label = [-1] * g.n
    blocks: list[list[int]] = []
    for s in range(g.n):
        if label[s] >= 0:
            continue
        label[s] = len(blocks)
        block = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in nbrs[u]:
                if label[v] < 0:
                    label[v] = label[s]
                    block.append(int(v))
                    queue.append(v)
        blocks.append(sorted(block))
    return blocks


@dataclass(frozen=True)
class ShortestPaths:
    """Single-source result. Unreachable nodes have ``inf`` distance and zero count."""

    source: int
    distances: np.ndarray
    counts: np.ndarray
    predecessors: list[list[int]]
    order: list[int]  # reachable nodes by non-decreasing distance


def shortest_paths(g: Graph, source: int, metric: str = "hop") -> ShortestPaths:
    """Distances, shortest-path counts and predecessor sets from ``source``.

    ``hop`` treats every positive-weight edge as length 1 (BFS);
    ``invweight`` uses length ``1/w`` (Dijkstra with near-tie merging).
    """
    if not 0 <= source < g.n:
        raise IndexError(f"source {source} out of range for n={g.n}")
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    n = g.n
    dist = np.full(n, np.inf)
    sigma = np.zeros(n)
    preds: list[list[int]] = [[] for _ in range(n)]
    order: list[int] = []
    dist[source] = 0.0
    sigma[source] = 1.0
    nbrs = g.neighbors()

    if metric == "hop":
        queue = deque([source])
        while queue:
            u = queue.popleft()
            order.append(u)
            du = dist[u] + 1.0
            for v in nbrs[u]:
                if dist[v] == np.inf:
                    dist[v] = du
                    queue.append(v)
                if dist[v] == du:
                    sigma[v] += sigma[u]
                    preds[v].append(u)
    else:
        W = g.weights
        done = np.zeros(n, dtype=bool)
        heap = [(0.0, source)]
        while heap:
            du, u = heapq.heappop(heap)
            if done[u] or du > dist[u]:
                continue
            done[u] = True
            order.append(u)
            for v in nbrs[u]:
                if done[v]:
                    continue
                alt = du + 1.0 / W[u, v]
                if alt < dist[v] * (1 - _TIE_RTOL):
                    dist[v] = alt
                    sigma[v] = sigma[u]
                    preds[v] = [u]
                    heapq.heappush(heap, (alt, v))
                elif abs(alt - dist[v]) <= _TIE_RTOL * dist[v]:
                    sigma[v] += sigma[u]
                    preds[v].append(u)
    return ShortestPaths(source, dist, sigma, preds, order)
