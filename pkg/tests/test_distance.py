import numpy as np
import pytest

from vireid.core.distance import direct_sq_euclidean, euclidean_view, feature_distances, pairwise_sq_euclidean
from vireid.core.errors import InvalidInputError

from helpers import build_split, random_split
import oracles


def test_identical_vectors():
    """Identical embeddings are at distance zero."""
    assert pairwise_sq_euclidean(np.array([[1.0, 2.0]]), np.array([[1.0, 2.0]]))[0, 0] == 0.0


def test_squared_form():
    """Distances are squared: the 3-4-5 triangle gives 25."""
    split = build_split([[[0.0, 0.0]]], [[[3.0, 4.0]]])
    dist = feature_distances(split)
    assert dist.values[0, 0] == pytest.approx(25.0)
    assert euclidean_view(dist).values[0, 0] == pytest.approx(5.0)


def test_matches_triple_loop():
    """A 20 x 30 split matches the triple-loop oracle."""
    split = random_split(np.random.default_rng(11), 20, 30, frames=3, dim=16)
    dist = feature_distances(split)
    queries = np.stack([r.frames.mean(axis=0) for r in split.queries])
    gallery = np.stack([r.frames.mean(axis=0) for r in split.gallery])
    assert dist.shape == (20, 30)
    assert np.max(np.abs(dist.values - oracles.sq_distances(queries, gallery))) <= 1e-5


def test_swap_symmetry():
    """Swapping query and gallery roles transposes the matrix."""
    split = random_split(np.random.default_rng(2), 6, 9, frames=2, dim=5)
    forward = feature_distances(split)
    backward = feature_distances(split.reversed())
    assert np.max(np.abs(forward.values - backward.values.T)) <= 1e-6
    assert forward.transpose().row_ids == backward.row_ids


def test_non_negative_under_cancellation():
    """Large nearly equal vectors never produce negative distances."""
    base = np.full((4, 64), 1e4)
    jitter = base + np.random.default_rng(0).standard_normal((4, 64)) * 1e-6
    values = pairwise_sq_euclidean(base, jitter)
    assert values.min() >= 0.0


def test_symmetric_self_distances():
    """Self-distances are symmetric with an exact zero diagonal."""
    x = np.random.default_rng(4).standard_normal((12, 8))
    values = pairwise_sq_euclidean(x)
    assert np.array_equal(values, values.T)
    assert np.all(np.diag(values) == 0.0)
    assert np.allclose(values, direct_sq_euclidean(x, x), atol=1e-9)


def test_dimension_mismatch():
    """Embeddings of different widths cannot be compared."""
    with pytest.raises(InvalidInputError):
        pairwise_sq_euclidean(np.zeros((2, 3)), np.zeros((2, 4)))


@pytest.mark.parametrize("offset", [0.0, 1e3, 1e6])
def test_zero_iff_equal_across_roles(offset):
    """Query and gallery rows are at distance zero exactly when they are equal."""
    rng = np.random.default_rng(8)
    x = offset + rng.standard_normal((5, 64))
    nudged = x[3:].copy()
    nudged[:, 0] += 1e-3
    y = np.vstack([x[:3].copy(), nudged, offset + rng.standard_normal((4, 64))])
    values = pairwise_sq_euclidean(x, y)
    equal = np.zeros(values.shape, dtype=bool)
    equal[[0, 1, 2], [0, 1, 2]] = True
    assert np.all(values[equal] <= 1e-9)
    assert np.all(values[~equal] > 1e-9)


@pytest.mark.parametrize("offset", [0.0, 1e3])
def test_row_rankings_match_direct_form(offset):
    """Every row ranks the gallery identically under the Gram and difference forms."""
    rng = np.random.default_rng(21)
    x = offset + rng.standard_normal((20, 32))
    y = offset + rng.standard_normal((30, 32))
    gram = np.argsort(pairwise_sq_euclidean(x, y), axis=1, kind="stable")
    direct = np.argsort(direct_sq_euclidean(x, y), axis=1, kind="stable")
    assert np.array_equal(gram, direct)


def test_split_rankings_match_direct_form():
    """Feature distances of a split rank like the difference form of its pooled embeddings."""
    split = random_split(np.random.default_rng(13), 15, 25, frames=4, dim=24)
    queries = np.stack([r.frames.mean(axis=0) for r in split.queries])
    gallery = np.stack([r.frames.mean(axis=0) for r in split.gallery])
    assert np.array_equal(
        np.argsort(feature_distances(split).values, axis=1, kind="stable"),
        np.argsort(direct_sq_euclidean(queries, gallery), axis=1, kind="stable"),
    )
