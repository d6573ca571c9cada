from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kminit.errors import DegenerateHistogram, DegenerateRange, DomainError
from kminit.otsu import (Histogram, between_class_profile, between_class_variance,
                         build_histogram, mean_bin, otsu_threshold)


def hist(counts):
    counts = np.asarray(counts, dtype=np.int64)
    return Histogram(counts=counts, total=int(counts.sum()), lo=0.0, hi=float(len(counts)))


def test_binning_examples():
    h = build_histogram([0.0, 1.0], 256)
    assert h.counts[0] == 1 and h.counts[255] == 1
    h = build_histogram([0.0, 4.0, 8.0], 4)
    assert list(h.bin_of([0.0, 4.0, 8.0])) == [0, 2, 3]
    y = np.random.default_rng(0).random(1000)
    assert build_histogram(y).counts.sum() == 1000


def test_binning_errors():
    with pytest.raises(DegenerateRange):
        build_histogram([2.0, 2.0])
    with pytest.raises(DomainError):
        build_histogram([])


def test_sigma_examples():
    h = hist([2, 1, 0, 0, 1, 2])
    assert between_class_variance(h, 1) == pytest.approx(169 / 36, rel=1e-12)
    assert between_class_variance(h, 0) == pytest.approx(3.125, rel=1e-12)
    assert between_class_variance(hist([0, 0, 3, 4]), 0) == 0.0
    with pytest.raises(DomainError):
        between_class_variance(h, 5)


def test_threshold_examples():
    assert otsu_threshold(hist([2, 1, 0, 0, 1, 2])).threshold_bin == 1
    r = otsu_threshold(hist([0, 3, 0, 0, 3]))
    assert r.threshold_bin == 1
    assert r.sigma_b == pytest.approx(2.25)
    with pytest.raises(DegenerateHistogram):
        otsu_threshold(hist([0, 5, 0]))


def _exact_sigmas(counts):
    """Definitional p0 p1 (mu0 - mu1)^2 for every t, in exact rationals."""
    n = sum(counts)
    total = sum(i * c for i, c in enumerate(counts))
    out = []
    c0 = s0 = 0
    for t in range(len(counts) - 1):
        c0 += counts[t]
        s0 += t * counts[t]
        c1 = n - c0
        if c0 == 0 or c1 == 0:
            out.append(Fraction(0))
            continue
        mu0, mu1 = Fraction(s0, c0), Fraction(total - s0, c1)
        out.append(Fraction(c0, n) * Fraction(c1, n) * (mu0 - mu1) ** 2)
    return out


def _random_counts(rng):
    bins = int(rng.integers(4, 1025))
    style = rng.integers(0, 3)
    if style == 0:
        counts = rng.integers(0, 50, size=bins)
    elif style == 1:  # sparse
        counts = rng.integers(0, 5, size=bins) * (rng.random(bins) < 0.1)
    else:  # symmetric, so ties are common
        half = rng.integers(0, 4, size=(bins + 1) // 2)
        counts = np.concatenate([half, half[::-1]])[:bins]
    if np.count_nonzero(counts) < 2:
        counts[0] += 1
        counts[-1] += 1
    return counts.astype(np.int64)


def test_threshold_matches_exhaustive_scan():
    rng = np.random.default_rng(20240601)
    for _ in range(1000):
        counts = _random_counts(rng)
        c = [int(v) for v in counts]
        sig = _exact_sigmas(c)
        best = max(sig)
        want = sig.index(best)  # lowest t among exact maxima
        r = otsu_threshold(hist(counts))
        assert r.threshold_bin == want
        assert r.sigma_b == pytest.approx(float(best), rel=1e-9, abs=1e-300)


def definitional_sigmas(counts):
    """p0 p1 (mu0 - mu1)^2 for every t with both classes nonempty (NaN elsewhere)."""
    p = counts / counts.sum()
    lv = np.arange(len(counts))
    p0 = np.cumsum(p)[:-1]
    m0 = np.cumsum(lv * p)[:-1]
    p1 = 1 - p0
    c0 = np.cumsum(counts)[:-1]
    ok = (c0 > 0) & (c0 < counts.sum())
    with np.errstate(divide="ignore", invalid="ignore"):
        mu0 = m0 / p0
        mu1 = (lv @ p - m0) / p1
        return np.where(ok, p0 * p1 * (mu0 - mu1) ** 2, np.nan)


def test_efficient_formula_identity():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        counts = _random_counts(rng)
        h = hist(counts)
        direct = definitional_sigmas(counts)
        ok = ~np.isnan(direct)
        np.testing.assert_allclose(between_class_profile(h)[ok], direct[ok], rtol=1e-9, atol=1e-12)
        assert np.all(between_class_profile(h)[~ok] == 0)
        for t in rng.choice(np.flatnonzero(ok), size=3):
            assert between_class_variance(h, int(t)) == pytest.approx(direct[t], rel=1e-9, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-1000, 1000), min_size=2, max_size=300),
       st.integers(-10**6, 10**6), st.integers(-8, 8), st.sampled_from([4, 16, 256, 1000]))
def test_affine_invariance(vals, shift, log_scale, bins):
    y = np.asarray(vals, dtype=np.float64)
    if y.max() == y.min():
        y[0] += 1
    base = build_histogram(y, bins)
    moved = build_histogram((y + shift) * 2.0 ** log_scale, bins)
    np.testing.assert_array_equal(base.counts, moved.counts)
    if np.count_nonzero(base.counts) >= 2:
        assert otsu_threshold(base).threshold_bin == otsu_threshold(moved).threshold_bin


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 30), min_size=2, max_size=200))
def test_sigma_bounds(counts):
    if sum(counts) == 0:
        counts[0] = 1
    h = hist(counts)
    lv = np.arange(len(counts))
    p = h.counts / h.total
    total_var = float(((lv - lv @ p) ** 2) @ p)
    for t in range(len(counts) - 1):
        s = between_class_variance(h, t)
        assert -1e-12 <= s <= total_var * (1 + 1e-12) + 1e-12


def test_cut_value_and_mean_bin():
    y = np.array([0.0, 0.1, 0.2, 0.9, 1.0])
    h = build_histogram(y, 10)
    r = otsu_threshold(h)
    left = h.bin_of(y) <= r.threshold_bin
    assert np.all(y[left] < r.cut_value) and np.all(y[~left] >= r.cut_value)
    assert mean_bin(y, h) == 4
    assert h.mean_level == pytest.approx((0 + 1 + 2 + 9 + 9) / 5)
