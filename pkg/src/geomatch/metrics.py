"""Recovery scoring and the noise-threshold reference scales.

The mismatch bound is 50 n / (d log(min(sigma^-1 d^-3 n^(-1/d), log n))),
counted in permutation-matrix entries; it is only meaningful when the inner
log argument exceeds 1, and is reported as +inf (vacuously satisfied)
otherwise. Natural logarithm throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .model import Permutation


class ThresholdMode(enum.Enum):
    ALMOST_EXACT = "almost_exact"
    EXACT = "exact"


@dataclass
class RecoveryScore:
    """Hamming counts of a recovered permutation against the truth, plus the bound check.

    ``hamming_entries`` counts differing permutation-matrix entries and always
    equals twice ``mismatched_vertices`` (each mismatched row changes exactly
    two entries). ``bound_defined`` is False when the bound degenerates to +inf.
    """

    hamming_entries: int
    mismatched_vertices: int
    exact: bool
    almost_exact_bound: float
    within_bound: bool
    bound_defined: bool


def score(pi_hat: Permutation, truth: Permutation, n: int, d: int, sigma: float) -> RecoveryScore:
    """Score a recovered permutation against the hidden truth at the given model scale."""
    if pi_hat.n != truth.n or pi_hat.n != n:
        raise ValueError(
            f"length mismatch: permutations have n={pi_hat.n} and n={truth.n}, expected {n}"
        )
    mismatched = int((pi_hat.map != truth.map).sum())
    hamming = 2 * mismatched
    if sigma > 0:
        ratio = d ** -3 * n ** (-1.0 / d) / sigma
    else:
        ratio = math.inf
    arg = min(ratio, math.log(n))
    if arg <= 1.0:
        bound = math.inf
        defined = False
        within = True
    else:
        bound = 50.0 * n / (d * math.log(arg))
        defined = True
        within = hamming <= bound
    return RecoveryScore(
        hamming_entries=hamming,
        mismatched_vertices=mismatched,
        exact=mismatched == 0,
        almost_exact_bound=bound,
        within_bound=within,
        bound_defined=defined,
    )


def threshold_sigma(n: int, d: int, mode: ThresholdMode) -> float:
    """Reference noise scale: d^-3 n^(-1/d) (almost-exact) or d^-3 n^(-2/d) (exact).

    Experiment noise levels are expressed as multiples of this scale.
    """
    if n < 2 or d < 1:
        raise ValueError(f"need n >= 2 and d >= 1, got n={n}, d={d}")
    exponent = 1.0 if mode is ThresholdMode.ALMOST_EXACT else 2.0
    return d ** -3 * n ** (-exponent / d)
