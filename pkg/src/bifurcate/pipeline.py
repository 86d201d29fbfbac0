"""End-to-end pipelines shared by the CLI and the acceptance suite."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .centrality import FeatureConfig, FeatureMatrix, feature_matrix
from .entropy import EntropyResult, entropy_series
from .graph import TemporalSequence
from .reduce import PcaModel, StepFit, fit_pca, mve_per_step, transform
from .stats import BifurcationReport, bifurcation_report

__all__ = ["extract_features", "embed_sequences", "DetectResult", "detect", "series_values"]

log = logging.getLogger(__name__)


def extract_features(seq: TemporalSequence, cfg: FeatureConfig | None = None, threads: int = 1) -> list[FeatureMatrix]:
    cfg = cfg or FeatureConfig()
    items = list(seq)
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(lambda tg: feature_matrix(tg[1], cfg, tg[0]), items))
    return [feature_matrix(g, cfg, t) for t, g in items]


def embed_sequences(feature_sets: Sequence[list[FeatureMatrix]], dim: int) -> tuple[PcaModel, list[list[np.ndarray]]]:
    """Fit one PCA on every (sequence, step, node) row, then project each step."""
    stacked = np.vstack([fm.values for fms in feature_sets for fm in fms])
    model = fit_pca(stacked, dim)
    return model, [[transform(model, fm) for fm in fms] for fms in feature_sets]


def series_values(results: list[EntropyResult], kind: str) -> np.ndarray:
    vals = [getattr(r, kind) for r in results]
    return np.array([np.nan if v is None else v for v in vals], dtype=float)


@dataclass
class DetectResult:
    report: BifurcationReport
    model: PcaModel
    embeddings_a: list[np.ndarray]
    embeddings_b: list[np.ndarray]
    fits_a: list[StepFit]
    fits_b: list[StepFit]
    trajectory_a: np.ndarray
    trajectory_b: np.ndarray
    entropy_a: list[EntropyResult]
    entropy_b: list[EntropyResult]
    timestamps: list[int]


def detect(
    seq_a: TemporalSequence,
    seq_b: TemporalSequence,
    feature_cfg: FeatureConfig | None = None,
    dim: int = 3,
    alpha: float = 0.975,
    threshold: float = 0.01,
    entropy_mode: str = "both",
    threads: int = 1,
) -> DetectResult:
    """Features, shared PCA, trimming, MVE, Hotelling and entropy for two sequences."""
    if seq_a.n != seq_b.n or seq_a.T != seq_b.T:
        raise ValueError(f"shape mismatch: (n={seq_a.n}, T={seq_a.T}) vs (n={seq_b.n}, T={seq_b.T})")
    stamps = list(seq_a.timestamps)
    feats_a = extract_features(seq_a, feature_cfg, threads)
    feats_b = extract_features(seq_b, feature_cfg, threads)
    model, (emb_a, emb_b) = embed_sequences([feats_a, feats_b], dim)
    fits_a, traj_a = mve_per_step(emb_a, alpha, stamps)
    fits_b, traj_b = mve_per_step(emb_b, alpha, stamps)
    ent_a = entropy_series(seq_a, entropy_mode, threads)
    ent_b = entropy_series(seq_b, entropy_mode, threads)
    exact = entropy_mode in ("exact", "both")
    approx = entropy_mode in ("approx", "both")
    report = bifurcation_report(
        [Y[f.retained] for Y, f in zip(emb_a, fits_a)],
        [Y[f.retained] for Y, f in zip(emb_b, fits_b)],
        series_values(ent_a, "exact") if exact else None,
        series_values(ent_b, "exact") if exact else None,
        threshold=threshold,
        timestamps=stamps,
        approx_a=series_values(ent_a, "approx") if approx else None,
        approx_b=series_values(ent_b, "approx") if approx else None,
    )
    for fms in (feats_a, feats_b):
        for fm in fms:
            report.warnings.extend(f"t={fm.t}: {w}" for w in fm.warnings)
    for fits in (fits_a, fits_b):
        report.warnings.extend(f.warning for f in fits if f.warning)
    return DetectResult(report, model, emb_a, emb_b, fits_a, fits_b, traj_a, traj_b, ent_a, ent_b, stamps)
