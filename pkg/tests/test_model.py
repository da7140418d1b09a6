import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geomatch.model import (
    MAX_SEED,
    ModelInstance,
    ModelKind,
    Permutation,
    TruthMode,
    derive_seed,
    observe_distance,
    observe_dot,
    sample_instance,
)


def instance_with_points(x: np.ndarray) -> ModelInstance:
    """Noiseless identity-truth instance holding a hand-chosen point set."""
    n, d = x.shape
    return ModelInstance(
        n=n, d=d, sigma=0.0, x=x, z=np.zeros_like(x), y=x.copy(),
        truth=Permutation.identity(n), seed=0,
    )


class TestPermutation:
    def test_identity(self):
        p = Permutation.identity(4)
        assert np.array_equal(p.map, np.arange(4))
        assert len(p) == 4

    def test_matrix_places_ones_at_map(self):
        p = Permutation(np.array([2, 0, 1]))
        m = p.matrix()
        assert m.shape == (3, 3)
        assert m[0, 2] == 1 and m[1, 0] == 1 and m[2, 1] == 1
        assert m.sum() == 3

    def test_matrix_acts_by_relabelling_rows(self):
        p = Permutation(np.array([2, 0, 1]))
        x = np.arange(6.0).reshape(3, 2)
        assert np.array_equal(p.matrix() @ x, x[p.map])

    def test_inverse_composes_to_identity(self):
        rng = np.random.default_rng(3)
        p = Permutation.random(7, rng)
        q = p.inverse()
        assert np.array_equal(p.map[q.map], np.arange(7))
        assert np.array_equal(q.map[p.map], np.arange(7))

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError, match="bijection"):
            Permutation(np.array([0, 0, 2]))
        with pytest.raises(ValueError, match="bijection"):
            Permutation(np.array([0, 3]))

    def test_equality_is_by_value(self):
        assert Permutation(np.array([1, 0])) == Permutation(np.array([1, 0]))
        assert Permutation(np.array([1, 0])) != Permutation(np.array([0, 1]))


class TestDeriveSeed:
    def test_deterministic(self):
        assert derive_seed(42, 1, 2, 3) == derive_seed(42, 1, 2, 3)

    def test_coordinates_matter(self):
        seen = {derive_seed(42, i, j) for i in range(8) for j in range(8)}
        assert len(seen) == 64

    def test_in_range(self):
        s = derive_seed(MAX_SEED, 1000, 1000)
        assert 0 <= s <= MAX_SEED


class TestSampleInstance:
    def test_deterministic_for_fixed_seed(self):
        a = sample_instance(5, 2, 1.0, seed=7)
        b = sample_instance(5, 2, 1.0, seed=7)
        assert np.array_equal(a.x, b.x)
        assert np.array_equal(a.z, b.z)
        assert np.array_equal(a.y, b.y)
        assert a.truth == b.truth

    def test_seeds_differ(self):
        a = sample_instance(5, 2, 1.0, seed=7)
        b = sample_instance(5, 2, 1.0, seed=8)
        assert not np.array_equal(a.x, b.x)

    def test_defining_identity_holds_exactly(self):
        inst = sample_instance(20, 3, 0.37, seed=11)
        assert np.array_equal(inst.y, inst.x[inst.truth.map] + inst.sigma * inst.z)

    def test_zero_noise_identity_truth_reproduces_x(self):
        inst = sample_instance(6, 2, 0.0, seed=5, truth_mode=TruthMode.IDENTITY)
        assert np.array_equal(inst.y, inst.x)

    def test_explicit_truth(self):
        perm = Permutation(np.array([2, 0, 1]))
        inst = sample_instance(3, 2, 0.0, seed=1, truth_mode=TruthMode.EXPLICIT, explicit=perm)
        assert inst.truth == perm
        assert np.array_equal(inst.y, inst.x[perm.map])

    def test_explicit_truth_wrong_length(self):
        perm = Permutation(np.array([1, 0]))
        with pytest.raises(ValueError, match="length"):
            sample_instance(3, 2, 0.0, seed=1, truth_mode=TruthMode.EXPLICIT, explicit=perm)

    def test_explicit_mode_requires_permutation(self):
        with pytest.raises(ValueError):
            sample_instance(3, 2, 0.0, seed=1, truth_mode=TruthMode.EXPLICIT)

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            sample_instance(0, 2, 0.1, seed=1)
        with pytest.raises(ValueError):
            sample_instance(5, 0, 0.1, seed=1)
        with pytest.raises(ValueError):
            sample_instance(5, 2, -0.1, seed=1)
        with pytest.raises(ValueError):
            sample_instance(5, 2, 0.1, seed=-1)
        with pytest.raises(ValueError):
            sample_instance(5, 2, 0.1, seed=MAX_SEED + 1)

    def test_marginal_moments(self):
        inst = sample_instance(1000, 5, 0.1, seed=1)
        flat = inst.y.ravel()
        assert abs(flat.mean()) < 0.05
        assert abs(flat.var() - 1.01) < 0.1

    @given(st.integers(0, 10_000))
    @settings(max_examples=50)
    def test_truth_is_always_a_bijection(self, seed):
        inst = sample_instance(8, 2, 0.5, seed=seed)
        assert np.array_equal(np.sort(inst.truth.map), np.arange(8))


class TestObserveDot:
    def test_hand_computed_product(self):
        pair = observe_dot(instance_with_points(np.array([[1.0, 1.0], [2.0, 0.0]])))
        assert np.array_equal(pair.a, np.array([[2.0, 2.0], [2.0, 4.0]]))
        assert np.array_equal(pair.a, pair.b)
        assert pair.kind is ModelKind.DOT_PRODUCT
        assert pair.d_hint == 2

    def test_orthonormal_rows_give_identity(self):
        pair = observe_dot(instance_with_points(np.eye(3)))
        assert np.allclose(pair.a, np.eye(3))

    def test_zero_noise_identity_truth_sides_match_exactly(self):
        inst = sample_instance(12, 3, 0.0, seed=9, truth_mode=TruthMode.IDENTITY)
        pair = observe_dot(inst)
        assert np.array_equal(pair.a, pair.b)

    def test_gram_matrices_are_psd(self):
        inst = sample_instance(30, 4, 0.2, seed=2)
        pair = observe_dot(inst)
        for m in (pair.a, pair.b):
            vals = np.linalg.eigvalsh(m)
            assert vals.min() >= -1e-8 * max(vals.max(), 1.0)

    @given(st.integers(0, 10_000))
    @settings(max_examples=30)
    def test_zero_noise_b_is_conjugated_a(self, seed):
        inst = sample_instance(7, 2, 0.0, seed=seed)
        pair = observe_dot(inst)
        p = inst.truth.map
        assert np.allclose(pair.b, pair.a[p][:, p], atol=1e-12)


class TestObserveDistance:
    def test_two_points_on_a_line(self):
        pair = observe_distance(instance_with_points(np.array([[0.0], [2.0]])))
        assert np.array_equal(pair.a, np.array([[0.0, 2.0], [2.0, 0.0]]))
        assert pair.kind is ModelKind.DISTANCE

    def test_unit_triangle(self):
        x = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        pair = observe_distance(instance_with_points(x))
        assert pair.a[0, 1] == pytest.approx(np.sqrt(2.0), rel=1e-15)
        assert pair.a[0, 2] == pytest.approx(1.0, rel=1e-15)
        assert pair.a[1, 2] == pytest.approx(1.0, rel=1e-15)

    def test_diagonal_is_zero_and_symmetric(self):
        inst = sample_instance(25, 3, 0.4, seed=6)
        pair = observe_distance(inst)
        for m in (pair.a, pair.b):
            assert np.array_equal(np.diag(m), np.zeros(25))
            assert np.array_equal(m, m.T)

    def test_triangle_inequality(self):
        inst = sample_instance(20, 3, 0.3, seed=4)
        m = observe_distance(inst).a
        # m[i, j] <= m[i, k] + m[k, j] for every triple
        assert np.all(m[:, None, :] + m.T[None, :, :] >= m[:, :, None] - 1e-9)

    @given(st.integers(0, 10_000))
    @settings(max_examples=30)
    def test_zero_noise_b_is_conjugated_a(self, seed):
        inst = sample_instance(7, 2, 0.0, seed=seed)
        pair = observe_distance(inst)
        p = inst.truth.map
        assert np.allclose(pair.b, pair.a[p][:, p], atol=1e-12)
