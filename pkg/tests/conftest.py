import itertools

import numpy as np
from hypothesis import settings

settings.register_profile("geomatch", deadline=None, derandomize=True)
settings.load_profile("geomatch")


def exhaustive_pair_maximum(u_basis, v_basis) -> float:
    """Max of <P U S, V> over every permutation and sign choice, by direct evaluation.

    Independent of the matcher: builds P U S explicitly and takes Frobenius
    inner products. Only sane for small n and d.
    """
    n, d = u_basis.vectors.shape
    best = -np.inf
    for perm in itertools.permutations(range(n)):
        p = np.zeros((n, n))
        p[np.arange(n), perm] = 1.0
        for signs in itertools.product((1.0, -1.0), repeat=d):
            candidate = float(np.sum((p @ u_basis.vectors * np.array(signs)) * v_basis.vectors))
            if candidate > best:
                best = candidate
    return best


def random_orthonormal(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    q, _ = np.linalg.qr(rng.standard_normal((n, d)))
    return q[:, :d]
