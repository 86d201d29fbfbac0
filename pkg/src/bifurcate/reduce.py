"""PCA embedding, chi-square Mahalanobis trimming and minimum-volume ellipsoids."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import gammainc

from .spectral import normalize_signs

__all__ = [
    "PcaModel",
    "Ellipsoid",
    "StepFit",
    "ReduceError",
    "fit_pca",
    "transform",
    "chi2_quantile",
    "mahalanobis_trim",
    "fit_mve",
    "mve_per_step",
]

log = logging.getLogger(__name__)


class ReduceError(ValueError):
    pass


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    scale: np.ndarray
    loadings: np.ndarray  # p x l, orthonormal columns
    explained_variance_ratio: np.ndarray

    @property
    def dim(self) -> int:
        return self.loadings.shape[1]

    def standardize(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) / self.scale

    def reconstruct(self, Y: np.ndarray) -> np.ndarray:
        """Map embeddings back to standardized feature space."""
        return np.asarray(Y) @ self.loadings.T


def fit_pca(X: np.ndarray, l: int) -> PcaModel:
    """Fit on rows of ``X`` after per-column standardization.

    Constant columns keep scale 1 so they standardize to zero.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ReduceError(f"expected a 2-D sample matrix, got shape {X.shape}")
    n, p = X.shape
    if n < 2:
        raise ReduceError("PCA needs at least 2 samples")
    if not 1 <= l <= p:
        raise ReduceError(f"target dimension {l} must be in 1..{p}")
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    scale = np.where(std > 1e-12 * np.maximum(1.0, np.abs(mean)), std, 1.0)
    Z = (X - mean) / scale
    _, s, Vt = np.linalg.svd(Z, full_matrices=False)
    total = float(np.sum(s**2))
    ratios = s[:l] ** 2 / total if total > 0 else np.zeros(l)
    loadings = normalize_signs(Vt[:l].T)
    return PcaModel(mean, scale, loadings, ratios)


def transform(model: PcaModel, X) -> np.ndarray:
    values = getattr(X, "values", X)
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[1] != model.mean.shape[0]:
        raise ReduceError(f"expected {model.mean.shape[0]} feature columns, got shape {values.shape}")
    return model.standardize(values) @ model.loadings


def chi2_quantile(df: int, alpha: float) -> float:
    """Chi-square quantile by bisection on the regularized lower incomplete gamma."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    cdf = lambda x: gammainc(df / 2.0, x / 2.0)  # noqa: E731
    lo, hi = 0.0, max(1.0, 2.0 * df)
    while cdf(hi) < alpha:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if cdf(mid) < alpha:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * hi:
            break
    return 0.5 * (lo + hi)


def mahalanobis_trim(Y: np.ndarray, alpha: float = 0.975) -> np.ndarray:
    """Indices whose squared Mahalanobis distance is within the chi-square ``alpha`` quantile.

    Falls back to every index, with a warning, when the sample covariance is
    singular or there are too few rows.
    """
    Y = np.asarray(Y, dtype=float)
    n, l = Y.shape
    everything = np.arange(n)
    if n <= l:
        warnings.warn(f"trim needs more than {l} rows, got {n}; keeping all", RuntimeWarning, stacklevel=2)
        return everything
    mu = Y.mean(axis=0)
    S = np.atleast_2d(np.cov(Y, rowvar=False))
    ev = np.linalg.eigvalsh(S)
    if ev[-1] <= 0 or ev[0] <= 1e-12 * ev[-1]:
        warnings.warn("singular sample covariance; trimming skipped", RuntimeWarning, stacklevel=2)
        return everything
    diff = Y - mu
    d2 = np.einsum("ij,ij->i", diff @ np.linalg.inv(S), diff)
    return np.flatnonzero(d2 <= chi2_quantile(l, alpha))


@dataclass(frozen=True)
class Ellipsoid:
    """``{x : ||Q_ell x - b|| <= 1}``, equivalently ``(x-c)' P (x-c) <= 1``."""

    Q_ell: np.ndarray
    b: np.ndarray

    @classmethod
    def from_center_shape(cls, center: np.ndarray, P: np.ndarray) -> "Ellipsoid":
        w, V = np.linalg.eigh(P)
        if w[0] <= 0:
            raise ReduceError("shape matrix is not positive definite")
        Q = (V * np.sqrt(w)) @ V.T
        Q = 0.5 * (Q + Q.T)
        return cls(Q, Q @ np.asarray(center, dtype=float))

    @property
    def P(self) -> np.ndarray:
        return self.Q_ell @ self.Q_ell

    @property
    def center(self) -> np.ndarray:
        return np.linalg.solve(self.Q_ell, self.b)

    @property
    def volume_proxy(self) -> float:
        """``det(P)**-0.5``, proportional to the volume."""
        return float(np.linalg.det(self.P) ** -0.5)

    def norms(self, X: np.ndarray) -> np.ndarray:
        """``||Q_ell x - b||`` for each row of ``X``."""
        return np.linalg.norm(np.atleast_2d(X) @ self.Q_ell.T - self.b, axis=1)

    def contains(self, X: np.ndarray, tol: float = 0.0) -> np.ndarray:
        return self.norms(X) <= 1.0 + tol

    def to_dict(self) -> dict:
        return {
            "center": self.center.tolist(),
            "P": self.P.tolist(),
            "volume_proxy": self.volume_proxy,
        }


def fit_mve(points: np.ndarray, tol: float = 1e-6, max_iter: int = 10_000) -> Ellipsoid:
    """Minimum-volume covering ellipsoid by Khachiyan's barycentric ascent.

    Uses the Todd-Yildirim away steps. Stops when every lifted point satisfies
    ``M_i <= (d+1)(1+tol)`` and every supported point ``M_i >= (d+1)(1-tol)``.
    The final shape is rescaled so the farthest input lies exactly on the
    boundary.
    """
    X = np.asarray(points, dtype=float)
    if X.ndim != 2:
        raise ReduceError(f"expected rows of points, got shape {X.shape}")
    N, d = X.shape
    if N < d + 1:
        raise ReduceError("rank-deficient point set")
    centered = X - X.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv[-1] <= 1e-10 * max(sv[0], 1e-300):
        raise ReduceError("rank-deficient point set")

    lifted = np.hstack([X, np.ones((N, 1))])
    u = np.full(N, 1.0 / N)
    dp1 = d + 1.0
    for _ in range(max_iter):
        Xu = (lifted.T * u) @ lifted
        M = np.einsum("ij,ij->i", lifted @ np.linalg.inv(Xu), lifted)
        j_up = int(np.argmax(M))
        support = np.flatnonzero(u > 0)
        j_dn = int(support[np.argmin(M[support])])
        up = M[j_up] / dp1 - 1.0
        down = 1.0 - M[j_dn] / dp1
        if up <= tol and down <= tol:
            break
        if up >= down:
            beta = (M[j_up] - dp1) / (dp1 * (M[j_up] - 1.0))
            u *= 1.0 - beta
            u[j_up] += beta
        else:
            beta = (dp1 - M[j_dn]) / (dp1 * (M[j_dn] - 1.0))
            beta = min(beta, u[j_dn] / (1.0 - u[j_dn]))
            u *= 1.0 + beta
            u[j_dn] -= beta
            u[j_dn] = max(u[j_dn], 0.0)
    else:
        warnings.warn(f"MVE did not reach tol={tol} in {max_iter} iterations", RuntimeWarning, stacklevel=2)

    c = u @ X
    cov = (X.T * u) @ X - np.outer(c, c)
    P = np.linalg.inv(cov) / d
    diff = X - c
    reach = float(np.max(np.einsum("ij,jk,ik->i", diff, P, diff)))
    P = P / reach
    return Ellipsoid.from_center_shape(c, P)


@dataclass(frozen=True)
class StepFit:
    t: int
    ellipsoid: Ellipsoid | None
    retained: np.ndarray
    warning: str | None = None

    @property
    def center(self) -> np.ndarray | None:
        return None if self.ellipsoid is None else self.ellipsoid.center


def mve_per_step(
    embeddings: Sequence[np.ndarray],
    alpha: float = 0.975,
    timestamps: Sequence[int] | None = None,
) -> tuple[list[StepFit], np.ndarray]:
    """Trim then fit one ellipsoid per step.

    Returns the fits and the centroid trajectory (``T x l``, NaN rows for gaps).
    """
    stamps = list(timestamps) if timestamps is not None else list(range(1, len(embeddings) + 1))
    fits: list[StepFit] = []
    for t, Y in zip(stamps, embeddings):
        Y = np.asarray(Y, dtype=float)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            keep = mahalanobis_trim(Y, alpha)
        note = "; ".join(str(w.message) for w in caught) or None
        try:
            ell = fit_mve(Y[keep])
        except ReduceError as exc:
            msg = f"t={t}: {exc}; gap entry"
            log.warning(msg)
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
            fits.append(StepFit(t, None, keep, msg))
            continue
        fits.append(StepFit(t, ell, keep, note))
    l = np.asarray(embeddings[0]).shape[1] if len(embeddings) else 0
    traj = np.array([f.center if f.ellipsoid is not None else np.full(l, np.nan) for f in fits]).reshape(-1, l)
    return fits, traj
