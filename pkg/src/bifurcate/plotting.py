"""Figure rendering for the report commands. Everything is written to files."""

from __future__ import annotations

from contextlib import contextmanager
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .reduce import StepFit  # noqa: E402

COLORS = {"a": "#1f77b4", "b": "#d62728"}

_STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def figsize(scale: float = 1.0, ratio: float | None = None) -> tuple[float, float]:
    width = 5.0 * scale
    ratio = ratio or (np.sqrt(5.0) - 1.0) / 2.0
    return width, width * ratio


@contextmanager
def figure(path: str | Path, scale: float = 1.0, ratio: float | None = None, **kw):
    """Yield ``(fig, ax)`` under the house style and save to ``path`` on exit."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=figsize(scale, ratio), **kw)
        try:
            yield fig, ax
            fig.savefig(path)
        finally:
            plt.close(fig)


def plot_pvalues(timestamps: Sequence[int], p_values: Sequence[float], threshold: float, path, critical=None) -> None:
    p = np.clip(np.asarray(p_values, dtype=float), 1e-300, 1.0)
    with figure(path) as (fig, ax):
        ax.semilogy(timestamps, p, "o-", color="k", ms=4)
        ax.axhline(threshold, ls="--", color="0.5", lw=1, label=f"threshold {threshold:g}")
        if critical is not None:
            ax.axvline(critical, color=COLORS["b"], lw=1, label=f"critical t={critical}")
        ax.set_xlabel("time step")
        ax.set_ylabel("Hotelling p-value")
        ax.legend(frameon=False)


def plot_entropy(timestamps: Sequence[int], series: dict[str, Sequence[float]], path, ylabel="Z-score") -> None:
    """One line per named series; names ending in ``_b`` draw in the attack colour."""
    with figure(path) as (fig, ax):
        for name, vals in series.items():
            color = COLORS["b"] if name.endswith("B") or name.endswith("_b") else COLORS["a"]
            style = "--" if name.startswith("Q") or "approx" in name else "-"
            ax.plot(timestamps, np.asarray(vals, dtype=float), style, marker="o", ms=3, color=color, label=name)
        ax.set_xlabel("time step")
        ax.set_ylabel(ylabel)
        ax.legend(frameon=False, ncol=2)


def _ellipse_outline(center: np.ndarray, P: np.ndarray, dims=(0, 1), k: int = 100) -> np.ndarray:
    # projection of {(x-c)'P(x-c) <= 1} onto two coordinates
    S = np.linalg.inv(P)[np.ix_(dims, dims)]
    w, V = np.linalg.eigh(S)
    ang = np.linspace(0, 2 * np.pi, k)
    circle = np.vstack([np.cos(ang), np.sin(ang)])
    return (V @ (np.sqrt(np.maximum(w, 0))[:, None] * circle)).T + center[list(dims)]


def plot_trajectories(fits_a: list[StepFit], fits_b: list[StepFit], path, labels=("normal", "abnormal")) -> None:
    """Centroid trajectories with per-step ellipsoid outlines on the first two components."""
    with figure(path, scale=1.1, ratio=0.8) as (fig, ax):
        for key, fits, label in (("a", fits_a, labels[0]), ("b", fits_b, labels[1])):
            good = [f for f in fits if f.ellipsoid is not None]
            if not good:
                continue
            for f in good:
                ring = _ellipse_outline(f.ellipsoid.center, f.ellipsoid.P)
                ax.plot(ring[:, 0], ring[:, 1], color=COLORS[key], lw=0.5, alpha=0.35)
            cen = np.array([f.center for f in good])
            ax.plot(cen[:, 0], cen[:, 1], "o-", color=COLORS[key], ms=3, label=label)
            for f, c in zip(good, cen):
                ax.annotate(str(f.t), c[:2], fontsize=6, color=COLORS[key], xytext=(2, 2), textcoords="offset points")
        ax.set_xlabel("PC1")
        ax.set_ylabel("PC2")
        ax.legend(frameon=False)


def plot_embedding(rows: np.ndarray, timestamps: np.ndarray, path) -> None:
    with figure(path, ratio=0.8) as (fig, ax):
        sc = ax.scatter(rows[:, 0], rows[:, 1] if rows.shape[1] > 1 else np.zeros(len(rows)), c=timestamps, s=4, cmap="viridis")
        fig.colorbar(sc, ax=ax, label="time step")
        ax.set_xlabel("PC1")
        ax.set_ylabel("PC2")


def plot_bench(rows: list[dict], path) -> None:
    n = [r["n"] for r in rows]
    with figure(path) as (fig, ax):
        ax.loglog(n, [r["t_exact"] for r in rows], "o-", color=COLORS["b"], label="exact (eigendecomposition)")
        ax.loglog(n, [r["t_approx"] for r in rows], "s-", color=COLORS["a"], label="quadratic approximation")
        ax.set_xlabel("nodes")
        ax.set_ylabel("median wall time [s]")
        ax.legend(frameon=False)
