"""Histogram construction over 1-D projections and Otsu's threshold.

Bin ``b`` of value ``y`` is ``floor(L * (y - min) / (max - min))``; the
maximum value lands on ``L`` and is clamped into the last bin.  A threshold
``t`` splits bins into ``[0, t]`` and ``[t + 1, L - 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateHistogram, DegenerateRange, DomainError


@dataclass(frozen=True, eq=False)
class Histogram:
    counts: np.ndarray
    total: int
    lo: float
    hi: float

    @property
    def bins(self) -> int:
        return len(self.counts)

    def bin_of(self, values) -> np.ndarray:
        return bin_indices(values, self.lo, self.hi, self.bins)

    @property
    def mean_level(self) -> float:
        """Mean bin level of the binned distribution (``mu_T``)."""
        levels = np.arange(self.bins)
        return float(levels @ self.counts / self.total)


@dataclass(frozen=True)
class OtsuResult:
    threshold_bin: int
    sigma_b: float
    cut_value: float


def bin_indices(values, lo: float, hi: float, bins: int) -> np.ndarray:
    y = np.asarray(values, dtype=np.float64)
    b = np.floor(bins * (y - lo) / (hi - lo)).astype(np.int64)
    return np.clip(b, 0, bins - 1)


def build_histogram(values, bins: int = 256) -> Histogram:
    y = np.asarray(values, dtype=np.float64).ravel()
    if y.size == 0:
        raise DomainError("cannot build a histogram of no values")
    if bins < 2:
        raise DomainError(f"need at least 2 bins, got {bins}")
    lo, hi = float(y.min()), float(y.max())
    if hi == lo:
        raise DegenerateRange("all projected values are equal")
    counts = np.bincount(bin_indices(y, lo, hi, bins), minlength=bins)
    return Histogram(counts=counts, total=int(y.size), lo=lo, hi=hi)


def between_class_variance(h: Histogram, t: int) -> float:
    """sigma_B^2(t) = (mu_T p0 - mu(t))^2 / (p0 p1); 0 if a class is empty."""
    if not 0 <= t <= h.bins - 2:
        raise DomainError(f"threshold {t} outside [0, {h.bins - 2}]")
    p = h.counts / h.total
    levels = np.arange(h.bins)
    p0 = float(p[: t + 1].sum())
    c0 = int(h.counts[: t + 1].sum())
    if c0 == 0 or c0 == h.total:
        return 0.0
    p1 = (h.total - c0) / h.total
    mu_t = float(levels[: t + 1] @ p[: t + 1])
    mu_total = float(levels @ p)
    return (mu_total * p0 - mu_t) ** 2 / (p0 * p1)


def _sigma_all(h: Histogram):
    """Single cumulative pass: sigma_B^2 for every t plus the exact integer
    quantities used to break floating-point ties."""
    counts = h.counts.astype(np.int64)[:-1]
    levels = np.arange(h.bins - 1, dtype=np.int64)
    n = h.total
    c0 = np.cumsum(counts)
    s0 = np.cumsum(counts * levels)
    s_total = int(np.arange(h.bins, dtype=np.int64) @ h.counts.astype(np.int64))
    # n^2 (mu_T p0 - mu(t)) == S*c0 - s0*n, exact in integers
    diff = s_total * c0 - s0 * n
    c1 = n - c0
    valid = (c0 > 0) & (c1 > 0)
    sigma = np.zeros(h.bins - 1)
    num = diff[valid].astype(np.float64) ** 2
    den = float(n) ** 2 * c0[valid].astype(np.float64) * c1[valid].astype(np.float64)
    sigma[valid] = num / den
    return sigma, diff, c0, valid


def between_class_profile(h: Histogram) -> np.ndarray:
    """sigma_B^2(t) for t = 0 .. L-2 from one cumulative pass."""
    return _sigma_all(h)[0]


def otsu_threshold(h: Histogram) -> OtsuResult:
    """Bin ``t*`` maximising between-class variance, lowest ``t`` on ties."""
    if np.count_nonzero(h.counts) < 2:
        raise DegenerateHistogram("histogram has fewer than two nonempty bins")
    sigma, diff, c0, valid = _sigma_all(h)
    best = float(sigma.max())
    # resolve near-ties exactly: compare diff^2 / (c0 * c1) as rationals
    near = np.flatnonzero(valid & (sigma >= best * (1 - 1e-12)))
    n = h.total
    t_star = int(near[0])
    for t in near[1:]:
        a_num, a_den = int(diff[t_star]) ** 2, int(c0[t_star]) * (n - int(c0[t_star]))
        b_num, b_den = int(diff[t]) ** 2, int(c0[t]) * (n - int(c0[t]))
        if b_num * a_den > a_num * b_den:
            t_star = int(t)
    width = (h.hi - h.lo) / h.bins
    return OtsuResult(
        threshold_bin=t_star,
        sigma_b=float(sigma[t_star]),
        cut_value=h.lo + (t_star + 1) * width,
    )


def mean_bin(values, h: Histogram) -> int:
    """Bin holding the mean of the projected values."""
    return int(h.bin_of([float(np.mean(values))])[0])
