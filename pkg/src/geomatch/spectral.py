"""Spectral extraction: top-d eigenpairs, thin SVD factors, and distance centering.

All eigenvector and left-singular-vector columns get a deterministic sign: each
column is flipped so that its largest-magnitude entry is positive, with ties
broken by the lowest index. Downstream matching enumerates signs anyway; the
convention only pins down reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

SYMMETRY_RTOL = 1e-10
DEGENERACY_ATOL = 1e-10


@dataclass
class SpectralBasis:
    """Top-d orthonormal eigenvectors (columns) with their eigenvalues, descending.

    ``degenerate`` flags a kept/dropped eigenvalue pair closer than 1e-10, the
    case where the retained subspace is not numerically well defined.
    """

    vectors: np.ndarray
    values: np.ndarray
    degenerate: bool = False

    def __post_init__(self):
        n, d = self.vectors.shape
        gram = self.vectors.T @ self.vectors
        if not np.allclose(gram, np.eye(d), atol=1e-8):
            raise ValueError("basis columns must be orthonormal")
        if np.any(np.diff(self.values) > 1e-12):
            raise ValueError("eigenvalues must be sorted non-increasing")

    @property
    def n(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def d(self) -> int:
        return int(self.vectors.shape[1])


@dataclass
class CenteredGram:
    """Centered Gram matrix produced from a distance matrix; annihilates the all-ones direction."""

    matrix: np.ndarray

    def __post_init__(self):
        scale = np.linalg.norm(self.matrix)
        tol = 1e-8 * max(scale, 1.0)
        if np.abs(self.matrix - self.matrix.T).max(initial=0.0) > tol:
            raise ValueError("centered Gram matrix must be symmetric")
        if np.abs(self.matrix.sum(axis=0)).max(initial=0.0) > tol:
            raise ValueError("centered Gram matrix must have zero column sums")


class SvdFactors(NamedTuple):
    left: np.ndarray
    values: np.ndarray
    right: np.ndarray


def _fix_column_signs(vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Flip columns so each largest-magnitude entry is positive; returns (fixed, flips)."""
    cols = np.arange(vectors.shape[1])
    anchor = np.argmax(np.abs(vectors), axis=0)
    flips = np.where(vectors[anchor, cols] < 0, -1.0, 1.0)
    return vectors * flips, flips


def _check_symmetric(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    tol = SYMMETRY_RTOL * max(np.linalg.norm(m), 1.0)
    if np.abs(m - m.T).max(initial=0.0) > tol:
        raise ValueError("matrix is not symmetric within tolerance")
    return m


def top_d_eigs(m: np.ndarray, d: int) -> SpectralBasis:
    """The d algebraically largest eigenvalues of a symmetric matrix with eigenvectors.

    Eigenvalues are chosen by algebraic value regardless of sign, so small
    negative values from numerical noise never displace genuine components.
    """
    m = _check_symmetric(m)
    n = m.shape[0]
    if not 1 <= d <= n:
        raise ValueError(f"dimension error: need 1 <= d <= n, got d={d}, n={n}")
    w, v = np.linalg.eigh(m)
    order = np.argsort(w)[::-1]
    w = w[order]
    v = v[:, order]
    degenerate = bool(d < n and w[d - 1] - w[d] < DEGENERACY_ATOL)
    vectors, _ = _fix_column_signs(v[:, :d])
    return SpectralBasis(vectors=vectors, values=w[:d].copy(), degenerate=degenerate)


def svd_factor(x: np.ndarray) -> SvdFactors:
    """Thin SVD x = left @ diag(values) @ right.T with the deterministic sign convention."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] < x.shape[1]:
        raise ValueError(f"dimension error: need n >= d, got shape {x.shape}")
    u, s, vh = np.linalg.svd(x, full_matrices=False)
    u, flips = _fix_column_signs(u)
    vh = vh * flips[:, None]
    return SvdFactors(left=u, values=s, right=vh.T)


def double_center(dist: np.ndarray) -> CenteredGram:
    """Convert a Euclidean distance matrix to the centered Gram matrix of its points.

    Computes -1/2 (I - F)(dist * dist)(I - F) with F = ones/n. For distances
    built from points x this equals xc @ xc.T where xc = (I - F) x, the
    classical multidimensional scaling identity.
    """
    dist = np.asarray(dist, dtype=float)
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {dist.shape}")
    tol = 1e-9 * max(np.abs(dist).max(initial=0.0), 1.0)
    if np.abs(np.diag(dist)).max(initial=0.0) > tol:
        raise ValueError("not a distance matrix: diagonal must be zero")
    if dist.min(initial=0.0) < -tol:
        raise ValueError("not a distance matrix: entries must be non-negative")
    sq = dist * dist
    row_means = sq.mean(axis=1, keepdims=True)
    col_means = sq.mean(axis=0, keepdims=True)
    centered = -0.5 * (sq - row_means - col_means + sq.mean())
    return CenteredGram(matrix=centered)
