import numpy as np
import pytest

from vireid.core.config import RerankConfig
from vireid.core.distance import feature_distances
from vireid.core.errors import ConfigError, InvalidInputError
from vireid.core.kreciprocal import (
    encode_sets,
    fuse,
    instance_jaccard,
    jaccard_distances,
    kreciprocal_rerank,
    population_jaccard,
    reciprocal_sets,
)
from vireid.core.models import DistanceMatrix

from helpers import random_split
import oracles


def _members(array):
    return set(int(v) for v in array)


def test_line_example():
    """Points at 0, 1 and 10 with k=1: only the mutual pair is reciprocal."""
    sets = reciprocal_sets(np.array([[0.0], [1.0]]), np.array([[10.0]]), 1)
    assert _members(sets.kr[0]) == {1}
    assert _members(sets.kr[1]) == {0}
    assert _members(sets.kr[2]) == set()


def test_saturation():
    """k = population - 1 makes every other item reciprocal."""
    x = np.random.default_rng(0).standard_normal((6, 3))
    sets = reciprocal_sets(x[:2], x[2:], 5)
    for p in range(6):
        assert _members(sets.kr[p]) == set(range(6)) - {p}


def test_population_too_small():
    """Fewer than k1 + 1 items is a configuration error."""
    with pytest.raises(ConfigError):
        reciprocal_sets(np.zeros((2, 2)), np.ones((2, 2)), 4)


def test_matches_brute_force_mutual_knn():
    """40 random points, k1=5: sets match the double-loop oracle exactly."""
    x = np.random.default_rng(8).standard_normal((40, 6))
    sets = reciprocal_sets(x[:15], x[15:], 5)
    dist = oracles.sq_distances(x, x).tolist()
    for p in range(40):
        assert _members(sets.kr[p]) == oracles.reciprocal(dist, p, 5) - {p}
        assert _members(sets.kr_expanded[p]) == oracles.expanded_reciprocal(dist, p, 5) - {p}


def test_set_invariants():
    """Mutuality holds, sets exclude self and kr is inside kr_expanded."""
    x = np.random.default_rng(9).standard_normal((30, 4))
    sets = reciprocal_sets(x[:10], x[10:], 4)
    for p in range(sets.population):
        kr = _members(sets.kr[p])
        assert p not in kr and p not in _members(sets.kr_expanded[p])
        assert kr <= _members(sets.kr_expanded[p])
        assert kr <= _members(sets.knn[p])
        for g in kr:
            assert p in _members(sets.knn[g])


def test_identical_sets_give_zero_distance():
    """Two coincident items with identical neighborhoods are at Jaccard distance 0."""
    anchors = np.array([[0.0, 0.0], [5.0, 5.0]])
    references = np.array([[0.0, 0.0], [5.0, 5.0]])
    _, jacc = population_jaccard(anchors, references, RerankConfig(k1=1, k2=1))
    assert jacc.values[0, 0] == pytest.approx(0.0, abs=1e-12)
    assert jacc.values[1, 1] == pytest.approx(0.0, abs=1e-12)


def test_disjoint_sets_give_unit_distance():
    """Items in far-apart clusters share nothing."""
    anchors = np.array([[0.0, 0.0], [100.0, 100.0]])
    references = np.array([[0.0, 0.1], [100.0, 100.1]])
    _, jacc = population_jaccard(anchors, references, RerankConfig(k1=1, k2=1))
    assert jacc.values[0, 1] == 1.0
    assert jacc.values[1, 0] == 1.0


def test_matches_materialised_sets():
    """A 20 x 20 instance with k1=5, k2=3 matches the materialised-set oracle."""
    rng = np.random.default_rng(12)
    anchors, references = rng.standard_normal((20, 8)), rng.standard_normal((20, 8))
    _, jacc = population_jaccard(anchors, references, RerankConfig(k1=5, k2=3))
    expected = oracles.jaccard(anchors, references, 5, 3)
    assert np.max(np.abs(jacc.values - expected)) <= 1e-6


def test_plain_sets_match_oracle():
    """With expansion disabled the plain reciprocal sets are encoded."""
    rng = np.random.default_rng(13)
    anchors, references = rng.standard_normal((12, 4)), rng.standard_normal((15, 4))
    _, jacc = population_jaccard(anchors, references, RerankConfig(k1=4, k2=2, expanded=False))
    expected = oracles.jaccard(anchors, references, 4, 2, expanded=False)
    assert np.max(np.abs(jacc.values - expected)) <= 1e-6


def test_k2_one_skips_query_expansion():
    """k2=1 leaves each encoding row as the item's own soft set."""
    x = np.random.default_rng(1).standard_normal((10, 3))
    sets = reciprocal_sets(x[:4], x[4:], 3)
    encoding = encode_sets(sets, 1)
    assert np.allclose(encoding.sum(axis=1), 1.0)
    for p in range(10):
        support = set(np.flatnonzero(encoding[p]).tolist())
        assert support == _members(sets.kr_expanded[p]) | {p}


def test_jaccard_range_and_thread_invariance():
    """Jaccard entries lie in [0, 1] and do not depend on the thread count."""
    split = random_split(np.random.default_rng(21), 25, 30, frames=4, dim=8, num_ids=10)
    config = RerankConfig()
    one = instance_jaccard(split, config, threads=1)
    four = instance_jaccard(split, config, threads=4)
    assert one.values.min() >= 0.0 and one.values.max() <= 1.0 + 1e-9
    assert one.values.tobytes() == four.values.tobytes()


def test_k2_above_k1_rejected():
    """k2 larger than the neighborhood size is rejected."""
    x = np.random.default_rng(0).standard_normal((8, 2))
    sets = reciprocal_sets(x[:4], x[4:], 2)
    base = DistanceMatrix(np.zeros((4, 4)), list("abcd"), list("efgh"))
    with pytest.raises(ConfigError):
        jaccard_distances(sets, base, 3)
    with pytest.raises(ConfigError):
        RerankConfig(k1=2, k2=3)


def test_base_shape_checked():
    """The base matrix must match the anchor/reference population."""
    x = np.random.default_rng(0).standard_normal((8, 2))
    sets = reciprocal_sets(x[:4], x[4:], 2)
    with pytest.raises(InvalidInputError):
        jaccard_distances(sets, DistanceMatrix(np.zeros((3, 4)), list("abc"), list("efgh")), 2)


def test_fuse_endpoints_and_arithmetic():
    """lambda1=1 keeps the base, lambda1=0 keeps the Jaccard term, 0.8 mixes them."""
    base = DistanceMatrix(np.full((2, 2), 4.0), ["a", "b"], ["c", "d"])
    jacc = DistanceMatrix(np.full((2, 2), 0.5), ["a", "b"], ["c", "d"], kind="jaccard")
    assert fuse(base, jacc, 1.0).values.tobytes() == base.values.tobytes()
    assert fuse(base, jacc, 0.0).values.tobytes() == jacc.values.tobytes()
    assert fuse(base, jacc, 0.8).values[0, 0] == pytest.approx(3.3)


def test_fuse_lambda_one_preserves_raw_ranking():
    """Re-ranking with lambda1=1 ranks every query as the raw distances do."""
    split = random_split(np.random.default_rng(5), 15, 20, frames=3, dim=6)
    raw = feature_distances(split)
    reranked = kreciprocal_rerank(split, RerankConfig(lambda1=1.0))
    assert np.array_equal(
        np.argsort(raw.values, axis=1, kind="stable"), np.argsort(reranked.values, axis=1, kind="stable")
    )
