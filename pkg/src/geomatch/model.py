"""Correlated Gaussian point clouds and the two observation types built from them.

An instance couples two point sets through a hidden permutation: the rows of
``y`` are the rows of ``x``, reordered by the permutation and perturbed by
isotropic Gaussian noise of level ``sigma``. Observations are either the two
Gram (dot-product) matrices or the two Euclidean distance matrices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist, squareform

MAX_SEED = 2**64 - 1


class TruthMode(enum.Enum):
    """How the hidden permutation of a sampled instance is chosen."""

    UNIFORM = "uniform"
    IDENTITY = "identity"
    EXPLICIT = "explicit"


class ModelKind(enum.Enum):
    """Observation type: Gram matrices or Euclidean distance matrices."""

    DOT_PRODUCT = "dot"
    DISTANCE = "dist"


@dataclass(eq=False)
class Permutation:
    """A bijection on {0, ..., n-1} stored as its image array, map[i] = pi(i)."""

    map: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.map, dtype=np.int64)
        if m.ndim != 1 or m.size == 0 or not np.array_equal(np.sort(m), np.arange(m.size)):
            raise ValueError("permutation map must be a bijection on 0..n-1")
        self.map = m

    @property
    def n(self) -> int:
        return int(self.map.size)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n, dtype=np.int64))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Permutation":
        return cls(rng.permutation(n))

    def matrix(self) -> np.ndarray:
        """Dense permutation matrix P with P[i, pi(i)] = 1, so (P @ x)[i] = x[pi(i)]."""
        p = np.zeros((self.n, self.n))
        p[np.arange(self.n), self.map] = 1.0
        return p

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.map)
        inv[self.map] = np.arange(self.n, dtype=np.int64)
        return Permutation(inv)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.map, other.map)

    def __len__(self) -> int:
        return self.n


@dataclass
class ModelInstance:
    """One sampled instance: latent point sets, noise, and the hidden permutation."""

    n: int
    d: int
    sigma: float
    x: np.ndarray
    z: np.ndarray
    y: np.ndarray
    truth: Permutation
    seed: int


@dataclass
class ObservationPair:
    """The two symmetric n x n observed matrices plus their kind and a rank hint."""

    a: np.ndarray
    b: np.ndarray
    kind: ModelKind
    d_hint: int


def derive_seed(master_seed: int, *coords: int) -> int:
    """Derive a child seed from a master seed and integer coordinates.

    Uses the splittable seed-sequence construction, so children are
    statistically independent and the mapping is pure: the same
    (master_seed, coords) always yields the same child seed.
    """
    entropy = (int(master_seed),) + tuple(int(c) for c in coords)
    return int(np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)[0])


def sample_instance(
    n: int,
    d: int,
    sigma: float,
    seed: int,
    truth_mode: TruthMode = TruthMode.UNIFORM,
    explicit: Optional[Permutation] = None,
) -> ModelInstance:
    """Sample one instance: y = P x + sigma z with P the hidden permutation matrix.

    Draw order under the seeded generator is fixed (x, then z, then the
    permutation), so identical arguments give bit-identical instances.
    """
    if n < 1 or d < 1:
        raise ValueError(f"invalid dimension: need n >= 1 and d >= 1, got n={n}, d={d}")
    if sigma < 0:
        raise ValueError(f"noise level must be non-negative, got {sigma}")
    if not 0 <= int(seed) <= MAX_SEED:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    rng = np.random.default_rng(int(seed))
    x = rng.standard_normal((n, d))
    z = rng.standard_normal((n, d))
    if truth_mode is TruthMode.UNIFORM:
        truth = Permutation.random(n, rng)
    elif truth_mode is TruthMode.IDENTITY:
        truth = Permutation.identity(n)
    elif truth_mode is TruthMode.EXPLICIT:
        if explicit is None:
            raise ValueError("explicit truth mode requires a permutation")
        if explicit.n != n:
            raise ValueError(
                f"permutation length mismatch: instance has n={n}, permutation has n={explicit.n}"
            )
        truth = explicit
    else:
        raise ValueError(f"unknown truth mode: {truth_mode!r}")
    y = x[truth.map] + sigma * z
    return ModelInstance(n=n, d=d, sigma=float(sigma), x=x, z=z, y=y, truth=truth, seed=int(seed))


def observe_dot(instance: ModelInstance) -> ObservationPair:
    """Gram observations a = x x^T and b = y y^T."""
    return ObservationPair(
        a=instance.x @ instance.x.T,
        b=instance.y @ instance.y.T,
        kind=ModelKind.DOT_PRODUCT,
        d_hint=instance.d,
    )


def observe_distance(instance: ModelInstance) -> ObservationPair:
    """Euclidean distance observations a_ij = ||x_i - x_j||, b_ij = ||y_i - y_j||.

    Distances are stored unsquared; squaring happens inside the centering
    transform that converts them back to a Gram matrix.
    """
    return ObservationPair(
        a=squareform(pdist(instance.x)),
        b=squareform(pdist(instance.y)),
        kind=ModelKind.DISTANCE,
        d_hint=instance.d,
    )
