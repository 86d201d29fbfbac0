"""Dense symmetric eigensolvers and the special eigenpairs used downstream.

Every full or eigenvalue-only decomposition goes through this module and bumps
a process-wide counter, so callers can prove a code path is decomposition-free.
"""

from __future__ import annotations

import threading
import warnings
from dataclasses import dataclass

import numpy as np

from .graph import LaplacianView, zero_threshold

__all__ = [
    "EigenDecomposition",
    "SpectralError",
    "eig_sym",
    "eigvals_sym",
    "jacobi_eigh",
    "normalize_signs",
    "fiedler_pair",
    "dominant_eigpair",
    "decomposition_count",
    "reset_decomposition_count",
]

SYMMETRY_TOL = 1e-10


class SpectralError(ValueError):
    pass


_counter_lock = threading.Lock()
_decompositions = 0


def _bump() -> None:
    global _decompositions
    with _counter_lock:
        _decompositions += 1


def decomposition_count() -> int:
    """Number of eigendecompositions performed in this process."""
    return _decompositions


def reset_decomposition_count() -> None:
    global _decompositions
    with _counter_lock:
        _decompositions = 0


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # column k pairs with eigenvalues[k]


def _check_symmetric(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise SpectralError(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if A.size and np.max(np.abs(A - A.T)) > SYMMETRY_TOL * scale:
        raise SpectralError("matrix is not symmetric")
    return A


def normalize_signs(V: np.ndarray) -> np.ndarray:
    # largest-magnitude entry positive; near-ties resolve to the lowest index
    mags = np.abs(V)
    lead = np.argmax(mags >= mags.max(axis=0) * (1 - 1e-9), axis=0)
    signs = np.sign(V[lead, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def jacobi_eigh(A: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi rotations. Returns unsorted ``(eigenvalues, eigenvectors)``.

    Stops once the off-diagonal Frobenius norm drops below ``tol`` times the
    Frobenius norm of ``A``.
    """
    a = np.array(A, dtype=float, copy=True)
    n = a.shape[0]
    V = np.eye(n)
    target = tol * max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                if abs(a[p, p]) + 1e-3 * abs(apq) == abs(a[p, p]) and abs(a[q, q]) + 1e-3 * abs(apq) == abs(a[q, q]):
                    # negligible against both diagonal entries
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e100:
                    t = 0.5 / theta
                elif theta != 0:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                else:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                vp = V[:, p].copy()
                V[:, p] = c * vp - s * V[:, q]
                V[:, q] = s * vp + c * V[:, q]
    else:
        warnings.warn(f"Jacobi did not converge in {max_sweeps} sweeps", RuntimeWarning, stacklevel=2)
    return np.diag(a).copy(), V


def eig_sym(A: np.ndarray, method: str = "lapack") -> EigenDecomposition:
    """Full ascending spectrum with orthonormal, sign-normalised eigenvectors.

    ``method="lapack"`` (default) calls ``numpy.linalg.eigh``;
    ``method="jacobi"`` uses :func:`jacobi_eigh` and is meant for small inputs.
    """
    A = _check_symmetric(A)
    _bump()
    if method == "lapack":
        w, V = np.linalg.eigh(A)
    elif method == "jacobi":
        w, V = jacobi_eigh(A)
        idx = np.argsort(w, kind="stable")
        w, V = w[idx], V[:, idx]
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return EigenDecomposition(w, normalize_signs(V))


def eigvals_sym(A: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues only."""
    A = _check_symmetric(A)
    _bump()
    return np.linalg.eigvalsh(A)


def fiedler_pair(lap: LaplacianView, method: str = "lapack") -> tuple[float, np.ndarray]:
    """Smallest eigenvalue above the zero threshold and its unit eigenvector."""
    dec = eig_sym(lap.L, method=method)
    w = dec.eigenvalues
    above = np.flatnonzero(w > zero_threshold(w))
    if above.size == 0:
        raise SpectralError("no nonzero eigenvalue")
    k = above[0]
    return float(w[k]), dec.eigenvectors[:, k]


def dominant_eigpair(W: np.ndarray, tol: float = 1e-10, max_iter: int = 10_000) -> tuple[float, np.ndarray]:
    """Perron eigenpair of a nonnegative symmetric matrix by power iteration.

    Iterates on ``W + s*I`` with ``s`` the largest weight, which keeps the
    eigenvectors but removes the ``-lambda_max`` tie of bipartite graphs.
    """
    W = _check_symmetric(W)
    if not np.any(W > 0):
        raise SpectralError("no positive eigenvalue")
    shift = float(W.max())
    v = np.full(W.shape[0], 1.0 / np.sqrt(W.shape[0]))
    for _ in range(max_iter):
        x = W @ v + shift * v
        x /= np.linalg.norm(x)
        if np.max(np.abs(x - v)) < tol:
            v = x
            break
        v = x
    else:
        warnings.warn("power iteration hit max_iter before converging", RuntimeWarning, stacklevel=2)
    v = np.clip(v, 0.0, None)
    v /= np.linalg.norm(v)
    lam = float(v @ W @ v)
    return lam, v
