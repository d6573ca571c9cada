"""Deterministic and random k-means initialization methods with a benchmark harness."""

__version__ = "0.1.0"

from .core import Assignment, assign_nearest, centroids, sse, squared_euclidean, stirling_second
from .dataset import (Dataset, DatasetSchema, class_count, load_bundled, load_delimited,
                      min_max_normalize)
from .initializers import (METHODS, SeededRng, forgy, hierarchical_init, initialize, kmeanspp,
                           macqueen_random, maximin)
from .lloyd import KMeansConfig, KMeansResult, run_kmeans

__all__ = [
    "Assignment", "Dataset", "DatasetSchema", "KMeansConfig", "KMeansResult", "METHODS",
    "SeededRng", "assign_nearest", "centroids", "class_count", "forgy", "hierarchical_init",
    "initialize", "kmeanspp", "load_bundled", "load_delimited", "macqueen_random", "maximin",
    "min_max_normalize", "run_kmeans", "squared_euclidean", "sse", "stirling_second",
]
