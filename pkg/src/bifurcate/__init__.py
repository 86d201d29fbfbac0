"""Bifurcation detection in temporal networks from centrality features and graph entropy."""

__version__ = "0.1.0"

from .centrality import FeatureConfig, FeatureMatrix, feature_matrix
from .entropy import EntropyResult, entropy_series, vnge_approx, vnge_bounds, vnge_exact
from .graph import Graph, TemporalSequence, connected_components, laplacian, shortest_paths
from .io import read_edgelist, write_edgelist
from .pipeline import detect
from .reduce import Ellipsoid, fit_mve, fit_pca, mahalanobis_trim, transform
from .stats import BifurcationReport, bifurcation_report, hotelling_t2, zscore_series

__all__ = [
    "BifurcationReport",
    "Ellipsoid",
    "EntropyResult",
    "FeatureConfig",
    "FeatureMatrix",
    "Graph",
    "TemporalSequence",
    "bifurcation_report",
    "connected_components",
    "detect",
    "entropy_series",
    "feature_matrix",
    "fit_mve",
    "fit_pca",
    "hotelling_t2",
    "laplacian",
    "mahalanobis_trim",
    "read_edgelist",
    "shortest_paths",
    "transform",
    "vnge_approx",
    "vnge_bounds",
    "vnge_exact",
    "write_edgelist",
    "zscore_series",
]
