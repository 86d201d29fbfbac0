"""Per-node centrality measures and the feature matrix built from them."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import METRICS, Graph, laplacian, shortest_paths
from .spectral import SpectralError, dominant_eigpair, fiedler_pair

__all__ = [
    "FeatureConfig",
    "FeatureMatrix",
    "FEATURE_FAMILIES",
    "degree",
    "eigenvector_centrality",
    "lfvc",
    "closeness",
    "betweenness",
    "lcc",
    "hop_walk_weights",
    "reference_distances",
    "distance_matrix",
    "feature_matrix",
]

log = logging.getLogger(__name__)

FEATURE_FAMILIES = ("degree", "eigenvector", "lfvc", "closeness", "betweenness", "lcc", "hopwalk")
_SHORT = {"degree": "deg", "eigenvector": "eig", "lfvc": "lfvc", "closeness": "clos", "betweenness": "betw", "lcc": "lcc"}


@dataclass(frozen=True)
class FeatureConfig:
    features: tuple[str, ...] = FEATURE_FAMILIES
    hop_depths: tuple[int, ...] = (2, 3)
    reference_nodes: tuple[int, ...] = ()
    metric: str = "hop"

    def __post_init__(self) -> None:
        bad = set(self.features) - set(FEATURE_FAMILIES)
        if bad:
            raise ValueError(f"unknown features {sorted(bad)}")
        if any(h < 1 for h in self.hop_depths):
            raise ValueError("hop depths must be >= 1")
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if any(r < 0 for r in self.reference_nodes):
            raise ValueError("reference nodes must be non-negative indices")

    def names(self) -> list[str]:
        out = []
        for f in self.features:
            if f == "hopwalk":
                out.extend(f"hop{h}" for h in self.hop_depths)
            else:
                out.append(_SHORT[f])
        out.extend(f"ref{r}" for r in self.reference_nodes)
        return out


@dataclass(frozen=True)
class FeatureMatrix:
    values: np.ndarray
    feature_names: tuple[str, ...]
    t: int | None = None
    warnings: tuple[str, ...] = field(default=())


def degree(g: Graph) -> np.ndarray:
    return g.weights @ np.ones(g.n)


def eigenvector_centrality(g: Graph) -> np.ndarray:
    _, v = dominant_eigpair(g.weights)
    return v


def lfvc(g: Graph) -> np.ndarray:
    """Sum of squared Fiedler-vector differences over each node's incident edges."""
    _, f = fiedler_pair(laplacian(g))
    A = g.adjacency
    diff2 = (f[:, None] - f[None, :]) ** 2
    return (A * diff2).sum(axis=1)


def _level_brandes(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All-source BFS distances and Brandes dependencies, one level per matmul.

    Row ``s`` of each matrix is the single-source result from ``s``. Returns
    ``(distances, dependencies)``; unreachable distances are ``inf``.
    """
    n = A.shape[0]
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    sigma = np.eye(n)
    frontier = np.eye(n, dtype=bool)
    levels = [frontier]
    d = 0
    while True:
        d += 1
        reach = (sigma * frontier) @ A
        new = (reach > 0) & np.isinf(dist)
        if not new.any():
            break
        dist[new] = d
        sigma[new] = reach[new]
        frontier = new
        levels.append(new)
    delta = np.zeros((n, n))
    for k in range(len(levels) - 1, 1, -1):
        upper = levels[k]
        coef = np.where(upper, (1.0 + delta) / np.where(upper, sigma, 1.0), 0.0)
        lower = levels[k - 1]
        delta[lower] = (sigma * (coef @ A))[lower]
    return dist, delta


def distance_matrix(g: Graph, metric: str = "hop") -> np.ndarray:
    if metric == "hop":
        return _level_brandes(g.adjacency)[0]
    return np.vstack([shortest_paths(g, s, metric).distances for s in range(g.n)])


def closeness(g: Graph, metric: str = "hop") -> np.ndarray:
    """Inverse total distance to the reachable nodes; 0 for isolated nodes."""
    D = distance_matrix(g, metric)
    finite = np.where(np.isfinite(D), D, 0.0)
    tot = finite.sum(axis=1)
    out = np.zeros(g.n)
    pos = tot > 0
    out[pos] = 1.0 / tot[pos]
    return out


def betweenness(g: Graph, metric: str = "hop") -> np.ndarray:
    """Unnormalised betweenness over unordered node pairs."""
    if metric == "hop":
        _, delta = _level_brandes(g.adjacency)
        return delta.sum(axis=0) / 2.0
    bc = np.zeros(g.n)
    for s in range(g.n):
        sp = shortest_paths(g, s, metric)
        dep = np.zeros(g.n)
        for w in reversed(sp.order):
            for v in sp.predecessors[w]:
                dep[v] += sp.counts[v] / sp.counts[w] * (1.0 + dep[w])
            if w != s:
                bc[w] += dep[w]
    return bc / 2.0


def lcc(g: Graph) -> np.ndarray:
    A = g.adjacency
    k = A.sum(axis=1)
    links = ((A @ A) * A).sum(axis=1) / 2.0
    out = np.zeros(g.n)
    ok = k > 1
    out[ok] = links[ok] / (k[ok] * (k[ok] - 1) / 2.0)
    return out


def hop_walk_weights(g: Graph, h: int) -> np.ndarray:
    """Row sums of ``W**h``: total weight of ``h``-edge walks leaving each node."""
    if h < 1:
        raise ValueError("hop depth must be >= 1")
    x = np.ones(g.n)
    for _ in range(h):
        x = g.weights @ x
    return x


def reference_distances(g: Graph, refs: Sequence[int], metric: str = "hop") -> np.ndarray:
    """Distances from each reference node; unreachable entries get ``n * max finite distance``."""
    if len(refs) == 0:
        raise ValueError("need at least one reference node")
    cols = np.column_stack([shortest_paths(g, int(r), metric).distances for r in refs])
    finite = cols[np.isfinite(cols)]
    sentinel = g.n * max(float(finite.max()) if finite.size else 0.0, 1.0)
    cols[~np.isfinite(cols)] = sentinel
    return cols


def feature_matrix(g: Graph, cfg: FeatureConfig | None = None, t: int | None = None) -> FeatureMatrix:
    """Stack the configured centralities column-wise.

    A feature that cannot be computed on this graph becomes an all-zero column
    and a recorded warning instead of an error.
    """
    cfg = cfg or FeatureConfig()
    if any(r >= g.n for r in cfg.reference_nodes):
        raise ValueError(f"reference node out of range for n={g.n}")
    cols: list[np.ndarray] = []
    notes: list[str] = []

    dist = delta = None
    if cfg.metric == "hop" and {"closeness", "betweenness"} & set(cfg.features):
        dist, delta = _level_brandes(g.adjacency)

    for name in cfg.features:
        if name == "hopwalk":
            cols.extend(hop_walk_weights(g, h) for h in cfg.hop_depths)
            continue
        try:
            if name == "degree":
                col = degree(g)
            elif name == "eigenvector":
                col = eigenvector_centrality(g)
            elif name == "lfvc":
                col = lfvc(g)
            elif name == "closeness":
                if dist is not None:
                    tot = np.where(np.isfinite(dist), dist, 0.0).sum(axis=1)
                    col = np.divide(1.0, tot, out=np.zeros(g.n), where=tot > 0)
                else:
                    col = closeness(g, cfg.metric)
            elif name == "betweenness":
                col = delta.sum(axis=0) / 2.0 if delta is not None else betweenness(g, cfg.metric)
            else:
                col = lcc(g)
        except SpectralError as exc:
            msg = f"{name}: {exc}; column set to zero"
            log.warning("t=%s %s", t, msg)
            notes.append(msg)
            col = np.zeros(g.n)
        cols.append(col)
    if cfg.reference_nodes:
        cols.extend(reference_distances(g, cfg.reference_nodes, cfg.metric).T)
    values = np.column_stack(cols) if cols else np.zeros((g.n, 0))
    return FeatureMatrix(values, tuple(cfg.names()), t, tuple(notes))
