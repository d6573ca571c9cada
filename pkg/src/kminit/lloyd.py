"""Batch k-means (Lloyd's algorithm) with a relative-improvement stopping rule."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np

from . import core


@dataclass(frozen=True)
class KMeansConfig:
    max_iters: int = 100
    epsilon: float = 1e-6

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")


@dataclass(eq=False)
class KMeansResult:
    centers: np.ndarray
    assignment: core.Assignment
    initial_sse: float
    final_sse: float
    iterations: int
    sse_trace: List[float] = field(default_factory=list)


def run_kmeans(ds, init, cfg: KMeansConfig = KMeansConfig()) -> KMeansResult:
    """Refine ``init`` centers until the SSE stops improving.

    Iteration i assigns points to the current centers, then moves each center
    to the mean of its points; SSE_i is measured after the move.  The run stops
    when ``(SSE_{i-1} - SSE_i) / SSE_i <= epsilon`` (SSE_0 being the SSE of the
    initial centers) or after ``max_iters`` iterations.
    """
    x = ds.points if hasattr(ds, "points") else np.asarray(ds, dtype=np.float64)
    centers = core.as_centers(init, x.shape[1])
    k = len(centers)
    if k > len(x):
        raise ValueError(f"k={k} exceeds the number of points n={len(x)}")

    assignment = core.assign_nearest(x, centers)
    prev = core.sse(x, centers, assignment)
    initial = prev
    trace = []
    for it in range(cfg.max_iters):
        if it:
            assignment = core.assign_nearest(x, centers)
        centers = core.centroids(x, assignment, k, centers)
        cur = core.sse(x, centers, assignment)
        trace.append(cur)
        if cur == 0.0 or (prev - cur) / cur <= cfg.epsilon:
            break
        prev = cur
    return KMeansResult(
        centers=centers,
        assignment=assignment,
        initial_sse=initial,
        final_sse=trace[-1],
        iterations=len(trace),
        sse_trace=trace,
    )
