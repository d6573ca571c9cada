"""Covariance and the principal eigenvector by power iteration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCovariance


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    m: np.ndarray
    sample_count: int


def covariance(points) -> CovarianceMatrix:
    """Population (1/n) covariance of the rows of ``points``."""
    x = np.asarray(points, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    centered = x - x.mean(axis=0)
    m = centered.T @ centered / x.shape[0]
    # symmetrize explicitly; BLAS may round the two triangles differently
    m = (m + m.T) / 2.0
    return CovarianceMatrix(m=m, sample_count=x.shape[0])


def variance_per_axis(points) -> np.ndarray:
    x = np.asarray(points, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    centered = x - x.mean(axis=0)
    np.square(centered, out=centered)
    return centered.sum(axis=0) / x.shape[0]


def _fix_sign(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(v)
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def _power(m: np.ndarray, v: np.ndarray, tol: float, max_iter: int):
    best_v, best_res = v, np.inf
    for _ in range(max_iter):
        w = m @ v
        lam = float(v @ w)
        res = float(np.linalg.norm(w - lam * v))
        rel = res / abs(lam) if lam != 0 else np.inf
        if rel < best_res:
            best_v, best_res = v, rel
        if rel <= tol:
            break
        norm = np.linalg.norm(w)
        if norm == 0.0:
            # start vector sits in the null space; nothing better is reachable
            break
        v = w / norm
    v = best_v / np.linalg.norm(best_v)
    return v, float(v @ m @ v)


def principal_eigenvector(c, tol: float = 1e-10, max_iter: int = 1000):
    """Dominant eigenvector of a symmetric PSD matrix by power iteration.

    Starts from the coordinate axis with the largest diagonal entry (lowest
    index on ties) and stops once ``||Cv - lambda v|| <= tol * |lambda|``.  If
    that never happens the iterate with the smallest relative residual is
    returned.  The sign is fixed so the first nonzero component is positive.

    A start axis that is itself a non-principal eigenvector would stall, so a
    second run from a fixed dense vector is made; its result replaces the
    first only when its eigenvalue is clearly larger.

    Returns ``(v, eigenvalue)``.
    """
    m = c.m if isinstance(c, CovarianceMatrix) else np.asarray(c, dtype=np.float64)
    if not np.any(m):
        raise DegenerateCovariance("covariance matrix is zero")
    dim = m.shape[0]
    start = np.zeros(dim)
    start[int(np.argmax(np.diag(m)))] = 1.0
    v, lam = _power(m, start, tol, max_iter)
    if dim > 1:
        idx = np.arange(dim)
        dense = np.where(idx % 2, -1.0, 1.0) / np.sqrt(idx + 1.0)
        v2, lam2 = _power(m, dense / np.linalg.norm(dense), tol, max_iter)
        if lam2 > lam * (1 + 1e-9):
            v, lam = v2, lam2
    v = _fix_sign(v)
    return v, float(v @ m @ v)
