"""Distances, nearest-center assignment, centroids and SSE.

Centers are plain ``(k, d)`` float arrays throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError


@dataclass(frozen=True, eq=False)
class Assignment:
    labels: np.ndarray
    counts: np.ndarray

    @classmethod
    def from_labels(cls, labels, k: int) -> "Assignment":
        labels = np.asarray(labels, dtype=np.intp)
        return cls(labels=labels, counts=np.bincount(labels, minlength=k))

    @property
    def k(self) -> int:
        return len(self.counts)


def _points(ds) -> np.ndarray:
    return ds.points if hasattr(ds, "points") else np.asarray(ds, dtype=np.float64)


def as_centers(centers, d: int | None = None) -> np.ndarray:
    c = np.asarray(centers, dtype=np.float64)
    if c.ndim == 1:
        c = c.reshape(-1, 1) if d == 1 else c.reshape(1, -1)
    if c.ndim != 2 or c.shape[0] < 1:
        raise DimensionError(f"centers must be a non-empty (k, d) array, got shape {c.shape}")
    if d is not None and c.shape[1] != d:
        raise DimensionError(f"centers have dimension {c.shape[1]}, data has {d}")
    if not np.all(np.isfinite(c)):
        raise ValueError("centers contain non-finite coordinates")
    return c


def squared_euclidean(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.dot(diff, diff))


def distances_to(points: np.ndarray, center: np.ndarray) -> np.ndarray:
    """Squared distance from every row of ``points`` to one center."""
    diff = points - center
    np.square(diff, out=diff)
    return diff.sum(axis=1)


def distance_matrix(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    # (k, n); computed by explicit differences so that equal distances stay equal
    return np.stack([distances_to(points, c) for c in centers])


def assign_nearest(ds, centers) -> Assignment:
    """Label each point with its nearest center; ties go to the lowest index."""
    x = _points(ds)
    c = as_centers(centers, x.shape[1])
    labels = np.argmin(distance_matrix(x, c), axis=0)
    return Assignment.from_labels(labels, len(c))


def centroids(ds, assignment: Assignment, k: int, previous) -> np.ndarray:
    """Mean of each cluster; an empty cluster keeps its ``previous`` center."""
    x = _points(ds)
    prev = as_centers(previous, x.shape[1])
    out = prev.copy()
    counts = np.bincount(assignment.labels, minlength=k)
    nonempty = counts > 0
    for j in range(x.shape[1]):
        sums = np.bincount(assignment.labels, weights=x[:, j], minlength=k)
        out[nonempty, j] = sums[nonempty] / counts[nonempty]
    return out


def sse(ds, centers, assignment: Assignment) -> float:
    x = _points(ds)
    c = as_centers(centers, x.shape[1])
    diff = x - c[assignment.labels]
    np.square(diff, out=diff)
    return float(diff.sum(axis=1).sum())


def centroid(points: np.ndarray) -> np.ndarray:
    return points.mean(axis=0)


def stirling_second(n: int, k: int) -> int:
    """Number of ways to partition ``n`` objects into ``k`` non-empty groups."""
    if k < 1 or k > n:
        raise DomainError(f"S(n, k) requires 1 <= k <= n, got n={n}, k={k}")
    # row-by-row recurrence S(m, j) = j*S(m-1, j) + S(m-1, j-1)
    row = [1] + [0] * k
    for _ in range(n):
        for j in range(k, 0, -1):
            row[j] = j * row[j] + row[j - 1]
        row[0] = 0
    return row[k]
