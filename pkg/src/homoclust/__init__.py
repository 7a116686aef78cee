"""Workbench for testing whether contextual embeddings identify homonyms.

Pipeline: parse a sense-tagged corpus, average contextual embeddings per
sense key, cluster the averages with cluster-count-free algorithms, compare
cluster labels to gold homonym groups, and plot 2D projections.
"""

from .cluster import ClusterParams, ClusterResult, agglomerative_ward, dbscan, estimate_bandwidth, mean_shift
from .dimred import Projection, mds_project, pca_project, tsne_project
from .embed import AveragedEmbedding, EmbeddingRecord, average_by_sense, context_window, read_embeddings, write_embeddings
from .evaluate import WordReport, adjusted_rand_index, align_labels, corpus_report, homonym_decision
from .viz import PlotSpec, scatter_svg

__version__ = "0.1.0"

__all__ = [
    "AveragedEmbedding",
    "ClusterParams",
    "ClusterResult",
    "EmbeddingRecord",
    "PlotSpec",
    "Projection",
    "WordReport",
    "adjusted_rand_index",
    "agglomerative_ward",
    "align_labels",
    "average_by_sense",
    "context_window",
    "corpus_report",
    "dbscan",
    "estimate_bandwidth",
    "homonym_decision",
    "mds_project",
    "mean_shift",
    "pca_project",
    "read_embeddings",
    "scatter_svg",
    "tsne_project",
    "write_embeddings",
]
