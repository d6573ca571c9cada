"""Center initialization methods.

Random: Forgy (F), MacQueen's second method (M), k-means++ (K).
Deterministic: maximin (X) and the divisive family Var-Part (V), PCA-Part (P),
Otsu Var-Part (OV) and Otsu PCA-Part (OP).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Union

import numpy as np

from . import core
from .errors import (DegenerateCovariance, DegenerateHistogram, DegenerateRange,
                     TooManyClusters, UnsplittableData)
from .linalg import covariance, principal_eigenvector, variance_per_axis
from .otsu import build_histogram, otsu_threshold


# --- random number generation ----------------------------------------------

@dataclass(frozen=True)
class SeededRng:
    """A seed plus the name of the bit generator it drives."""

    seed: int
    algorithm: str = "mt19937"

    def generator(self) -> np.random.Generator:
        if self.algorithm == "mt19937":
            bitgen = np.random.MT19937(self.seed)
        elif self.algorithm == "pcg64":
            bitgen = np.random.PCG64(self.seed)
        else:
            raise ValueError(f"unknown RNG algorithm {self.algorithm!r}")
        return np.random.Generator(bitgen)


RngLike = Union[SeededRng, np.random.Generator, int, None]


def as_generator(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, SeededRng):
        return rng.generator()
    return SeededRng(0 if rng is None else int(rng)).generator()


def _check_k(n: int, k: int):
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if k > n:
        raise TooManyClusters(f"k={k} exceeds the number of points n={n}")


# --- random methods ----------------------------------------------------------

def forgy(ds, k: int, rng: RngLike) -> np.ndarray:
    """Centroids of a uniformly random partition of the points into k groups.

    A group that ends up empty gets a uniformly random data point instead.
    """
    x = ds.points
    _check_k(len(x), k)
    gen = as_generator(rng)
    labels = gen.integers(0, k, size=len(x))
    assignment = core.Assignment.from_labels(labels, k)
    centers = core.centroids(x, assignment, k, np.zeros((k, x.shape[1])))
    for i in np.flatnonzero(assignment.counts == 0):
        centers[i] = x[gen.integers(0, len(x))]
    return centers


def macqueen_random(ds, k: int, rng: RngLike) -> np.ndarray:
    x = ds.points
    _check_k(len(x), k)
    idx = as_generator(rng).choice(len(x), size=k, replace=False)
    return x[idx].copy()


def kmeanspp(ds, k: int, rng: RngLike, first: Optional[int] = None) -> np.ndarray:
    """k-means++ seeding.

    ``first`` pins the index of the first center (otherwise uniform).  If every
    remaining point coincides with a chosen center, the next one is drawn
    uniformly from the indices not yet chosen.
    """
    x = ds.points
    n = len(x)
    _check_k(n, k)
    gen = as_generator(rng)
    chosen = [int(gen.integers(0, n)) if first is None else int(first)]
    md = core.distances_to(x, x[chosen[0]])
    for _ in range(1, k):
        total = md.sum()
        if total > 0:
            cum = np.cumsum(md)
            idx = int(np.searchsorted(cum, gen.random() * cum[-1], side="right"))
            if idx >= n or md[idx] == 0:
                idx = int(np.flatnonzero(md)[-1])
        else:
            free = np.setdiff1d(np.arange(n), chosen)
            idx = int(free[gen.integers(0, len(free))])
        chosen.append(idx)
        np.minimum(md, core.distances_to(x, x[idx]), out=md)
    return x[chosen].copy()


# --- deterministic methods ---------------------------------------------------

def maximin(ds, k: int) -> np.ndarray:
    """First center is the data centroid; each next one is the point farthest
    from its nearest chosen center (lowest index on ties)."""
    x = ds.points
    _check_k(len(x), k)
    centers = [core.centroid(x)]
    md = core.distances_to(x, centers[0])
    for _ in range(1, k):
        idx = int(np.argmax(md))
        centers.append(x[idx].copy())
        np.minimum(md, core.distances_to(x, x[idx]), out=md)
    return np.array(centers)


class AxisRule(str, enum.Enum):
    VARIANCE = "variance"
    PCA = "pca"


class SplitRule(str, enum.Enum):
    MEAN = "mean"
    OTSU = "otsu"


@dataclass(eq=False)
class ClusterNode:
    members: np.ndarray
    centroid: np.ndarray
    sse: float
    order: int = 0

    @classmethod
    def of(cls, x: np.ndarray, members: np.ndarray, order: int = 0) -> "ClusterNode":
        pts = x[members]
        c = pts.mean(axis=0)
        return cls(members=members, centroid=c,
                   sse=float(core.distances_to(pts, c).sum()), order=order)

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class SplitRecord:
    """One division performed by :func:`hierarchical_init`."""

    node: int
    node_sse: float
    axis: Union[int, str]
    direction: np.ndarray = field(repr=False)
    threshold: float
    rule: str
    left_sse: float
    right_sse: float
    left_size: int
    right_size: int
    otsu_bin: Optional[int] = None
    mean_bin: Optional[int] = None


def _projection(pts: np.ndarray, axis_rule: AxisRule):
    """Partitioning direction for ``pts``: (axis label, unit vector, values)."""
    var = variance_per_axis(pts)
    j = int(np.argmax(var))
    if axis_rule == AxisRule.PCA:
        try:
            v, _ = principal_eigenvector(covariance(pts))
            return "pc", v, pts @ v
        except DegenerateCovariance:
            pass  # fall back to the variance axis
    v = np.zeros(pts.shape[1])
    v[j] = 1.0
    return j, v, pts[:, j].copy()


def split_node(node: ClusterNode, ds, axis_rule="variance", split_rule="mean",
               bins: int = 256, next_order: int = 0):
    """Divide ``node`` in two along its partitioning axis.

    Mean rule: projections strictly below the projected mean go left.  Otsu
    rule: projections whose histogram bin is at most ``t*`` go left.

    Returns ``(left, right, record)``; raises :class:`DegenerateRange` if the
    node cannot be divided.
    """
    axis_rule, split_rule = AxisRule(axis_rule), SplitRule(split_rule)
    x = ds.points if hasattr(ds, "points") else np.asarray(ds)
    if node.size < 2:
        raise DegenerateRange("a single point cannot be split")
    pts = x[node.members]
    axis, v, y = _projection(pts, axis_rule)
    if y.max() == y.min():
        raise DegenerateRange("zero projection range")

    otsu_bin = mean_b = None
    if split_rule == SplitRule.MEAN:
        threshold = float(y.mean())
        go_left = y < threshold
    else:
        h = build_histogram(y, bins)
        try:
            res = otsu_threshold(h)
        except DegenerateHistogram as exc:
            raise DegenerateRange(str(exc)) from None
        threshold = res.cut_value
        b = h.bin_of(y)
        go_left = b <= res.threshold_bin
        otsu_bin = res.threshold_bin
        mean_b = int(h.bin_of([y.mean()])[0])
    if go_left.all() or not go_left.any():
        raise DegenerateRange("split leaves one side empty")

    left = ClusterNode.of(x, node.members[go_left], next_order)
    right = ClusterNode.of(x, node.members[~go_left], next_order + 1)
    record = SplitRecord(
        node=node.order, node_sse=node.sse, axis=axis, direction=v, threshold=threshold,
        rule=split_rule.value, left_sse=left.sse, right_sse=right.sse,
        left_size=left.size, right_size=right.size, otsu_bin=otsu_bin, mean_bin=mean_b,
    )
    return left, right, record


def hierarchical_tree(ds, k: int, axis_rule="variance", split_rule="mean", bins: int = 256):
    """Run the divisive procedure; returns ``(leaves, split_records)``."""
    x = ds.points
    _check_k(len(x), k)
    leaves: List[ClusterNode] = [ClusterNode.of(x, np.arange(len(x)), 0)]
    records = []
    next_order = 1
    stuck = set()
    while len(leaves) < k:
        candidates = sorted((nd for nd in leaves if nd.order not in stuck),
                            key=lambda nd: (-nd.sse, nd.order))
        for node in candidates:
            try:
                left, right, rec = split_node(node, ds, axis_rule, split_rule, bins, next_order)
            except DegenerateRange:
                stuck.add(node.order)
                continue
            leaves.remove(node)
            leaves.extend([left, right])
            records.append(rec)
            next_order += 2
            break
        else:
            raise UnsplittableData(
                f"only {len(leaves)} of {k} clusters could be formed", leaves=len(leaves))
    leaves.sort(key=lambda nd: nd.order)
    return leaves, records


def hierarchical_init(ds, k: int, axis_rule="variance", split_rule="mean",
                      bins: int = 256) -> np.ndarray:
    leaves, _ = hierarchical_tree(ds, k, axis_rule, split_rule, bins)
    return np.array([leaf.centroid for leaf in leaves])


# --- method registry ---------------------------------------------------------

@dataclass(frozen=True)
class InitMethod:
    code: str
    title: str
    is_random: bool
    fn: Callable = field(repr=False, compare=False)

    def __call__(self, ds, k: int, rng: RngLike = None, bins: int = 256) -> np.ndarray:
        if self.is_random:
            return self.fn(ds, k, rng)
        return self.fn(ds, k, bins)


METHODS = {
    "F": InitMethod("F", "Forgy", True, forgy),
    "M": InitMethod("M", "MacQueen (random points)", True, macqueen_random),
    "K": InitMethod("K", "k-means++", True, kmeanspp),
    "X": InitMethod("X", "maximin", False, lambda ds, k, bins: maximin(ds, k)),
    "V": InitMethod("V", "Var-Part", False,
                    lambda ds, k, bins: hierarchical_init(ds, k, "variance", "mean", bins)),
    "P": InitMethod("P", "PCA-Part", False,
                    lambda ds, k, bins: hierarchical_init(ds, k, "pca", "mean", bins)),
    "OV": InitMethod("OV", "Otsu Var-Part", False,
                     lambda ds, k, bins: hierarchical_init(ds, k, "variance", "otsu", bins)),
    "OP": InitMethod("OP", "Otsu PCA-Part", False,
                     lambda ds, k, bins: hierarchical_init(ds, k, "pca", "otsu", bins)),
}

METHOD_ORDER = ("F", "M", "K", "X", "V", "P", "OV", "OP")

HIERARCHICAL_RULES = {
    "V": ("variance", "mean"),
    "P": ("pca", "mean"),
    "OV": ("variance", "otsu"),
    "OP": ("pca", "otsu"),
}


def get_method(code: str) -> InitMethod:
    try:
        return METHODS[code.upper()]
    except KeyError:
        raise ValueError(f"unknown method {code!r}; choose from {', '.join(METHOD_ORDER)}") from None


def initialize(ds, method: str, k: int, rng: RngLike = None, bins: int = 256) -> np.ndarray:
    return get_method(method)(ds, k, rng, bins)
