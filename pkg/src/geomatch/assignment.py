"""Maximum linear assignment: production solver plus an exhaustive oracle.

The production path wraps scipy's shortest-augmenting-path solver (cubic worst
case) in maximization form. The oracle enumerates all n! permutations and is
capped at n <= 10; it breaks ties by the lexicographically smallest permutation
so its output is fully deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .model import Permutation

BRUTE_FORCE_CAP = 10
_CHUNK = 40320


@dataclass
class AssignmentSolution:
    """A permutation assigning row i to column perm.map[i], with its total value."""

    perm: Permutation
    value: float


def _check_cost(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] == 0:
        raise ValueError(f"cost matrix must be square and non-empty, got shape {c.shape}")
    if not np.isfinite(c).all():
        raise ValueError("non-finite cost: entries must be finite")
    return c


def solve_max_lap(c: np.ndarray) -> AssignmentSolution:
    """Permutation maximizing sum_i c[i, perm(i)]."""
    c = _check_cost(c)
    rows, cols = linear_sum_assignment(c, maximize=True)
    value = float(c[rows, cols].sum())
    return AssignmentSolution(perm=Permutation(cols.astype(np.int64)), value=value)


def brute_force_lap(c: np.ndarray) -> AssignmentSolution:
    """Exhaustive maximum over all n! permutations, n <= 10.

    Ties go to the lexicographically smallest permutation. Enumeration is
    chunked so the n = 10 case stays within a few MB of memory.
    """
    c = _check_cost(c)
    n = c.shape[0]
    if n > BRUTE_FORCE_CAP:
        raise ValueError(f"too large for brute force: n={n} exceeds cap {BRUTE_FORCE_CAP}")
    rows = np.arange(n)
    best_value = -np.inf
    best_perm = None
    perms = itertools.permutations(range(n))
    while True:
        chunk = list(itertools.islice(perms, _CHUNK))
        if not chunk:
            break
        arr = np.array(chunk, dtype=np.int64)
        values = c[rows, arr].sum(axis=1)
        i = int(np.argmax(values))
        if values[i] > best_value:
            best_value = float(values[i])
            best_perm = arr[i].copy()
    return AssignmentSolution(perm=Permutation(best_perm), value=best_value)
