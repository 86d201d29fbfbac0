"""Temporal edge-list text format.

::

    # nodes=N steps=T
    t u v [w]

``t`` runs over ``1..T``, ``u``/``v`` are 0-based node indices and ``w`` is a
positive weight (default 1.0). Steps without records are edgeless graphs.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .graph import Graph, GraphError, TemporalSequence

__all__ = ["read_edgelist", "write_edgelist", "IngestionError"]

_HEADER = re.compile(r"#\s*nodes\s*=\s*(\d+)\s+steps\s*=\s*(\d+)")


class IngestionError(GraphError):
    def __init__(self, path, lineno: int | None, msg: str):
        where = f"{path}:{lineno}" if lineno is not None else str(path)
        super().__init__(f"{where}: {msg}")
        self.lineno = lineno


def read_edgelist(path: str | Path) -> TemporalSequence:
    path = Path(path)
    n = T = None
    mats: list[np.ndarray] = []
    with path.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _HEADER.match(line)
                if m and n is None:
                    n, T = int(m.group(1)), int(m.group(2))
                    if n < 1 or T < 1:
                        raise IngestionError(path, lineno, "header needs nodes >= 1 and steps >= 1")
                    mats = [np.zeros((n, n)) for _ in range(T)]
                continue
            if n is None:
                raise IngestionError(path, lineno, "record before '# nodes=N steps=T' header")
            parts = line.split()
            if len(parts) not in (3, 4):
                raise IngestionError(path, lineno, f"expected 't u v [w]', got {line!r}")
            try:
                t, u, v = int(parts[0]), int(parts[1]), int(parts[2])
                w = float(parts[3]) if len(parts) == 4 else 1.0
            except ValueError:
                raise IngestionError(path, lineno, f"unparseable record {line!r}") from None
            if not 1 <= t <= T:
                raise IngestionError(path, lineno, f"time step {t} outside 1..{T}")
            if not (0 <= u < n and 0 <= v < n):
                raise IngestionError(path, lineno, f"node index out of range 0..{n - 1}")
            if u == v:
                raise IngestionError(path, lineno, f"self-loop on node {u}")
            if not (np.isfinite(w) and w > 0):
                raise IngestionError(path, lineno, f"weight must be positive, got {w}")
            W = mats[t - 1]
            if W[u, v] != 0:
                raise IngestionError(path, lineno, f"duplicate edge ({u}, {v}) at t={t}")
            W[u, v] = W[v, u] = w
    if n is None:
        raise IngestionError(path, None, "missing '# nodes=N steps=T' header")
    return TemporalSequence(tuple(Graph(W) for W in mats), tuple(range(1, T + 1)))


def write_edgelist(seq: TemporalSequence, path: str | Path) -> None:
    """Write ``seq`` with its steps renumbered ``1..T``."""
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"# nodes={seq.n} steps={seq.T}\n")
        for k, g in enumerate(seq.graphs, start=1):
            for u, v, w in g.edges():
                fh.write(f"{k} {u} {v} {w:.17g}\n")
