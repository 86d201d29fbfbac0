"""Seeded random-graph generators and a hub-flooding attack scenario.

All randomness comes from ``numpy.random.Generator`` (PCG64) seeded explicitly
per call; nothing touches global RNG state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, TemporalSequence

__all__ = ["ScenarioConfig", "erdos_renyi", "barabasi_albert", "attack_inject", "scenario", "FAMILIES"]

FAMILIES = ("er", "ba")


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def erdos_renyi(n: int, p_edge: float, seed=None) -> Graph:
    if not 0.0 <= p_edge <= 1.0:
        raise ValueError("p_edge must lie in [0, 1]")
    rng = _rng(seed)
    iu = np.triu_indices(n, 1)
    W = np.zeros((n, n))
    W[iu] = (rng.random(len(iu[0])) < p_edge).astype(float)
    return Graph(W + W.T)


def barabasi_albert(n: int, m_attach: int, seed=None) -> Graph:
    """Preferential attachment grown from an ``m_attach``-clique.

    Edge count is ``C(m_attach, 2) + (n - m_attach) * m_attach``.
    """
    if not 1 <= m_attach < n:
        raise ValueError("need 1 <= m_attach < n")
    rng = _rng(seed)
    W = np.zeros((n, n))
    ends: list[int] = []
    for i in range(m_attach):
        for j in range(i + 1, m_attach):
            W[i, j] = W[j, i] = 1.0
            ends += [i, j]
    for new in range(m_attach, n):
        if ends:
            targets: set[int] = set()
            while len(targets) < m_attach:
                targets.add(ends[rng.integers(len(ends))])
        else:
            targets = set(range(m_attach))
        for t in sorted(targets):
            W[new, t] = W[t, new] = 1.0
            ends += [new, t]
    return Graph(W)


def attack_inject(
    g: Graph,
    intensity: float,
    hub_count: int,
    seed=None,
    flood_fraction: float = 0.2,
    flood_weight: float = 10.0,
) -> Graph:
    """Concentrate traffic on the ``hub_count`` highest-degree nodes.

    A fraction ``intensity`` of the edges not touching a hub is rewired so one
    endpoint becomes a random hub; then a random ``flood_fraction`` of the
    other nodes sends a ``flood_weight`` edge to each hub.
    """
    if hub_count < 1:
        raise ValueError("hub_count must be >= 1")
    if not 0.0 <= intensity <= 1.0:
        raise ValueError("intensity must lie in [0, 1]")
    if not 0.0 <= flood_fraction <= 1.0:
        raise ValueError("flood_fraction must lie in [0, 1]")
    rng = _rng(seed)
    n = g.n
    W = np.array(g.weights)
    deg = W.sum(axis=1)
    hubs = sorted(range(n), key=lambda i: (-deg[i], i))[: min(hub_count, n)]
    is_hub = np.zeros(n, dtype=bool)
    is_hub[hubs] = True

    plain = [(u, v, w) for u, v, w in g.edges() if not (is_hub[u] or is_hub[v])]
    k = int(round(intensity * len(plain)))
    if k:
        for idx in rng.choice(len(plain), size=k, replace=False):
            u, v, w = plain[idx]
            keep = u if rng.random() < 0.5 else v
            hub = hubs[rng.integers(len(hubs))]
            W[u, v] = W[v, u] = 0.0
            if W[keep, hub] == 0.0:
                W[keep, hub] = W[hub, keep] = w

    n_flood = int(round(flood_fraction * (n - 1)))
    if n_flood:
        for hub in hubs:
            others = np.delete(np.arange(n), hub)
            src = rng.choice(others, size=n_flood, replace=False)
            W[src, hub] = W[hub, src] = flood_weight
    return Graph(W)


@dataclass(frozen=True)
class ScenarioConfig:
    n: int = 400
    T: int = 12
    t0: int = 7
    intensity: float = 0.3
    hub_count: int = 3
    seed: int = 0
    family: str = "er"
    p_edge: float = 0.025
    m_attach: int = 5
    flood_fraction: float = 0.2
    flood_weight: float = 10.0

    def __post_init__(self) -> None:
        if self.T < 1 or self.t0 < 1:
            raise ValueError("need T >= 1 and t0 >= 1")
        if not 0.0 <= self.intensity <= 1.0:
            raise ValueError("intensity must lie in [0, 1]")
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        if self.hub_count < 1:
            raise ValueError("hub_count must be >= 1")


def scenario(cfg: ScenarioConfig) -> tuple[TemporalSequence, TemporalSequence]:
    """Normal and attacked sequences on steps ``1..T``.

    Both share the base draw at every step; steps ``t >= t0`` of the abnormal
    sequence are additionally attack-injected. ``t0 > T`` means no attack.
    """
    children = np.random.SeedSequence(cfg.seed).spawn(2 * cfg.T)
    normal, abnormal = [], []
    for k in range(cfg.T):
        t = k + 1
        if cfg.family == "er":
            g = erdos_renyi(cfg.n, cfg.p_edge, children[2 * k])
        else:
            g = barabasi_albert(cfg.n, cfg.m_attach, children[2 * k])
        normal.append(g)
        if t >= cfg.t0:
            g = attack_inject(
                g, cfg.intensity, cfg.hub_count, children[2 * k + 1], cfg.flood_fraction, cfg.flood_weight
            )
        abnormal.append(g)
    stamps = tuple(range(1, cfg.T + 1))
    return TemporalSequence(tuple(normal), stamps), TemporalSequence(tuple(abnormal), stamps)
