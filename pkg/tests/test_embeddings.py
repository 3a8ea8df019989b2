import numpy as np
import pytest

from otbmorph.embeddings import ensure_embedding, euclidean_distance, l2_normalize
from otbmorph.errors import DegenerateVectorError, DimensionMismatchError


def test_normalize_three_four_five():
    out = l2_normalize(np.array([3.0, 4.0]))
    assert np.allclose(out, [0.6, 0.8], atol=1e-12)


def test_normalize_already_unit():
    out = l2_normalize(np.array([1.0, 0.0]))
    assert np.array_equal(out, [1.0, 0.0])


def test_normalize_zero_vector_rejected():
    with pytest.raises(DegenerateVectorError):
        l2_normalize(np.array([0.0, 0.0]))


def test_normalize_near_zero_rejected():
    with pytest.raises(DegenerateVectorError):
        l2_normalize(np.array([1e-13, 0.0]))


def test_normalize_non_finite_rejected():
    with pytest.raises(DegenerateVectorError):
        l2_normalize(np.array([np.nan, 1.0]))
    with pytest.raises(DegenerateVectorError):
        l2_normalize(np.array([np.inf, 1.0]))


def test_normalize_requires_1d():
    with pytest.raises(DimensionMismatchError):
        l2_normalize(np.zeros((2, 2)))


def test_normalize_unit_norm_property():
    rng = np.random.default_rng(11)
    for _ in range(200):
        v = rng.normal(size=int(rng.integers(2, 128)))
        out = l2_normalize(v)
        assert abs(np.linalg.norm(out) - 1.0) < 1e-9


def test_distance_identical_is_zero():
    a = np.array([1.0, 0.0])
    assert euclidean_distance(a, a) == 0.0


def test_distance_orthogonal_units():
    d = euclidean_distance(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    assert d == pytest.approx(1.414214, abs=1e-6)


def test_distance_antipodal_units():
    d = euclidean_distance(np.array([1.0, 0.0]), np.array([-1.0, 0.0]))
    assert d == 2.0


def test_distance_symmetry_exact():
    rng = np.random.default_rng(5)
    for _ in range(200):
        a = rng.normal(size=16)
        b = rng.normal(size=16)
        assert euclidean_distance(a, b) == euclidean_distance(b, a)


def test_distance_triangle_inequality():
    rng = np.random.default_rng(6)
    for _ in range(200):
        a, b, c = (l2_normalize(rng.normal(size=32)) for _ in range(3))
        assert euclidean_distance(a, c) <= (
            euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-9
        )


def test_distance_range_for_unit_vectors():
    rng = np.random.default_rng(7)
    for _ in range(300):
        a = l2_normalize(rng.normal(size=24))
        b = l2_normalize(rng.normal(size=24))
        assert 0.0 <= euclidean_distance(a, b) <= 2.0 + 1e-9


def test_distance_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        euclidean_distance(np.zeros(3), np.zeros(4))


def test_ensure_embedding_checks_dim():
    v = ensure_embedding([1.0, 0.0, 0.0], dim=3)
    assert v.shape == (3,)
    with pytest.raises(DimensionMismatchError):
        ensure_embedding([1.0, 0.0], dim=3)
