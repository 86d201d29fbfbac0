"""Z-scores, two-sample Hotelling T-squared, and the bifurcation report."""

from __future__ import annotations

import json
import logging
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import betainc

__all__ = [
    "HotellingResult",
    "BifurcationReport",
    "zscore_series",
    "hotelling_t2",
    "f_sf",
    "bifurcation_report",
]

log = logging.getLogger(__name__)


def zscore_series(values: Sequence[float]) -> np.ndarray:
    """Standardize over time with the population std; NaN entries pass through."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("empty series")
    ok = np.isfinite(v)
    out = np.full(v.shape, np.nan)
    if not ok.any():
        return out
    mu = v[ok].mean()
    sd = v[ok].std()
    out[ok] = 0.0 if sd < 1e-12 else (v[ok] - mu) / sd
    return out


def f_sf(x: float, d1: float, d2: float) -> float:
    """Upper tail of the F(d1, d2) distribution."""
    if x <= 0:
        return 1.0
    return float(betainc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * x)))


@dataclass(frozen=True)
class HotellingResult:
    t2: float
    f: float
    p: float
    df1: int
    df2: int
    ridge: float = 0.0


def hotelling_t2(A: np.ndarray, B: np.ndarray) -> HotellingResult:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    na, nb = len(A), len(B)
    l = A.shape[1]
    if na < 1 or nb < 1 or na + nb - 2 < l or na + nb - l - 1 < 1:
        raise ValueError(f"insufficient samples ({na}, {nb}) for dimension {l}")
    diff = A.mean(axis=0) - B.mean(axis=0)
    scatter = np.zeros((l, l))
    for S in (A, B):
        c = S - S.mean(axis=0)
        scatter += c.T @ c
    pooled = scatter / (na + nb - 2)
    ev = np.linalg.eigvalsh(pooled)
    tr = float(np.trace(pooled))
    ridge = 0.0
    if ev[0] <= 1e-12 * max(ev[-1], 1e-300):
        ridge = 1e-10 * tr / l if tr > 0 else 1e-10
        warnings.warn(f"near-singular pooled covariance; ridge {ridge:.3e} added", RuntimeWarning, stacklevel=2)
        pooled = pooled + ridge * np.eye(l)
    t2 = na * nb / (na + nb) * float(diff @ np.linalg.solve(pooled, diff))
    df2 = na + nb - l - 1
    f = t2 * df2 / ((na + nb - 2) * l)
    return HotellingResult(t2, f, f_sf(f, l, df2), l, df2, ridge)


@dataclass
class BifurcationReport:
    timestamps: list[int]
    t2: list[float]
    f: list[float]
    p_values: list[float]
    threshold: float
    critical_time: int | None
    z_exact_a: list[float] = field(default_factory=list)
    z_exact_b: list[float] = field(default_factory=list)
    z_approx_a: list[float] = field(default_factory=list)
    z_approx_b: list[float] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        def clean(x):
            if isinstance(x, float) and not math.isfinite(x):
                return None
            if isinstance(x, list):
                return [clean(y) for y in x]
            return x

        return json.dumps({k: clean(v) for k, v in asdict(self).items()}, indent=2)

    def rows(self) -> list[dict]:
        """Rows of the per-step CSV."""
        def at(seq, k):
            return seq[k] if k < len(seq) else float("nan")

        return [
            {
                "t": t,
                "T2": self.t2[k],
                "F": self.f[k],
                "p": self.p_values[k],
                "zV_A": at(self.z_exact_a, k),
                "zV_B": at(self.z_exact_b, k),
                "zQ_A": at(self.z_approx_a, k),
                "zQ_B": at(self.z_approx_b, k),
            }
            for k, t in enumerate(self.timestamps)
        ]


def _as_list(x) -> list[float]:
    return [float(v) for v in np.asarray(x, dtype=float)] if x is not None else []


def bifurcation_report(
    clouds_a: Sequence[np.ndarray],
    clouds_b: Sequence[np.ndarray],
    entropy_a: Sequence[float] | None = None,
    entropy_b: Sequence[float] | None = None,
    threshold: float = 0.01,
    timestamps: Sequence[int] | None = None,
    approx_a: Sequence[float] | None = None,
    approx_b: Sequence[float] | None = None,
) -> BifurcationReport:
    """Per-step Hotelling test of cloud A against cloud B.

    The critical time is the first step whose p-value falls below
    ``threshold``. Steps where the test cannot run get NaN and are skipped.
    """
    if len(clouds_a) != len(clouds_b):
        raise ValueError("sequences differ in length")
    stamps = list(timestamps) if timestamps is not None else list(range(1, len(clouds_a) + 1))
    for series in (entropy_a, entropy_b, approx_a, approx_b):
        if series is not None and len(series) != len(stamps):
            raise ValueError("entropy series length does not match the number of steps")
    t2s, fs, ps, notes = [], [], [], []
    for t, A, B in zip(stamps, clouds_a, clouds_b):
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                res = hotelling_t2(A, B)
            notes.extend(f"t={t}: {w.message}" for w in caught)
            t2s.append(res.t2)
            fs.append(res.f)
            ps.append(res.p)
        except (ValueError, np.linalg.LinAlgError) as exc:
            log.warning("t=%s: Hotelling test failed: %s", t, exc)
            notes.append(f"t={t}: test failed: {exc}")
            t2s.append(float("nan"))
            fs.append(float("nan"))
            ps.append(float("nan"))
    critical = next((t for t, p in zip(stamps, ps) if np.isfinite(p) and p < threshold), None)
    z = lambda s: _as_list(zscore_series(s)) if s is not None else []  # noqa: E731
    return BifurcationReport(
        timestamps=[int(t) for t in stamps],
        t2=t2s,
        f=fs,
        p_values=ps,
        threshold=threshold,
        critical_time=critical,
        z_exact_a=z(entropy_a),
        z_exact_b=z(entropy_b),
        z_approx_a=z(approx_a),
        z_approx_b=z(approx_b),
        warnings=notes,
    )
