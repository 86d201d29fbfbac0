"""von Neumann graph entropy: exact spectral form, quadratic closed form, and bounds.

All logarithms are natural.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import Graph, TemporalSequence, laplacian, zero_threshold
from .spectral import eigvals_sym

__all__ = [
    "EntropyError",
    "EntropyResult",
    "MODES",
    "vnge_exact",
    "vnge_approx",
    "vnge_bounds",
    "entropy_bounds_from_spectrum",
    "scaled_spectrum",
    "entropy_series",
]

log = logging.getLogger(__name__)

MODES = ("exact", "approx", "both")
_CLAMP = 1e-10


class EntropyError(ValueError):
    pass


@dataclass(frozen=True)
class EntropyResult:
    """One snapshot's entropy values. ``None`` marks a value not computed."""

    t: int | None = None
    exact: float | None = None
    approx: float | None = None
    c: float | None = None
    n_plus: int | None = None
    lower: float | None = None
    upper: float | None = None
    gap: bool = False


def _scale(g: Graph) -> float:
    tr = float(g.weights.sum())
    if tr <= 0:
        raise EntropyError("zero-trace Laplacian")
    return 1.0 / tr


def scaled_spectrum(g: Graph) -> np.ndarray:
    """Ascending eigenvalues of ``L / trace(L)``, cleaned of round-off.

    Eigenvalues of ``L`` under the zero threshold become exactly 0, and the
    rest are divided by their own sum (equal to ``trace(L)`` up to rounding)
    so the distribution sums to 1.
    """
    c = _scale(g)
    lam_L = eigvals_sym(laplacian(g).L)
    if c * lam_L[0] < -_CLAMP:
        raise EntropyError(f"Laplacian not PSD: eigenvalue {c * lam_L[0]:.3e}")
    lam_L[np.abs(lam_L) < zero_threshold(lam_L)] = 0.0
    return np.clip(lam_L / lam_L.sum(), 0.0, 1.0)


def _shannon(lam: np.ndarray) -> float:
    pos = lam[lam > 0]
    return float(-(pos * np.log(pos)).sum()) + 0.0  # no -0.0


def vnge_exact(g: Graph) -> tuple[float, np.ndarray]:
    """Exact entropy and the clamped scaled spectrum it was computed from."""
    lam = scaled_spectrum(g)
    return _shannon(lam), lam


def vnge_approx(g: Graph) -> float:
    """Quadratic approximation ``1 - c^2 (d.d + sum(W*W))``, no eigendecomposition."""
    c = _scale(g)
    W = g.weights
    d = W.sum(axis=1)
    return float(1.0 - c * c * (d @ d + np.sum(W * W)))


def entropy_bounds_from_spectrum(lam: np.ndarray, q: float) -> tuple[float, float]:
    """Bounds from a cleaned scaled spectrum (exact zeros for the null space)."""
    nz = lam[lam > 0]
    if nz.size < 2:
        raise EntropyError("bounds need at least two nonzero eigenvalues")
    lo, hi = float(nz.min()), float(nz.max())
    return -q * np.log(hi) / (1.0 - lo), -q * np.log(lo) / (1.0 - hi)


def vnge_bounds(g: Graph) -> tuple[float, float]:
    """Lower and upper bounds on the exact entropy from the extreme nonzero eigenvalues."""
    return entropy_bounds_from_spectrum(scaled_spectrum(g), vnge_approx(g))


def _one(t: int, g: Graph, mode: str) -> EntropyResult:
    try:
        c = _scale(g)
    except EntropyError as exc:
        log.warning("t=%s: %s; gap entry", t, exc)
        return EntropyResult(t=t, gap=True)
    q = vnge_approx(g) if mode in ("approx", "both") else None
    if mode == "approx":
        return EntropyResult(t=t, approx=q, c=c)
    v, lam = vnge_exact(g)
    nplus = int(np.count_nonzero(lam > 0))
    lower = upper = None
    if nplus >= 2:
        lower, upper = entropy_bounds_from_spectrum(lam, q if q is not None else float(1.0 - lam @ lam))
    return EntropyResult(t=t, exact=v, approx=q, c=c, n_plus=nplus, lower=lower, upper=upper)


def entropy_series(seq: TemporalSequence, mode: str = "both", threads: int = 1) -> list[EntropyResult]:
    """Per-step entropy in time order. Edgeless steps yield ``gap=True`` entries."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    items = list(seq)
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(lambda tg: _one(tg[0], tg[1], mode), items))
    return [_one(t, g, mode) for t, g in items]
