import json
import math

import numpy as np
import pytest

from vireid.core.config import RerankConfig
from vireid.core.errors import EmptyEvaluationError, InvalidInputError
from vireid.core.metrics import average_precision, evaluate, format_table, report_to_dict, reports_to_json
from vireid.core.models import DistanceMatrix

from helpers import from_distances
import oracles


def _evaluate(dist, q_pids, g_pids, q_cams=None, g_cams=None, exclude_same_camera=False):
    split = from_distances(dist, q_pids, g_pids, q_cams, g_cams)
    matrix = DistanceMatrix(np.asarray(dist, dtype=np.float64), split.query_ids, split.gallery_ids)
    return evaluate(matrix, split, exclude_same_camera)


HAND_CASES = [
    # (distances, query pids, gallery pids, cmc, mAP)
    ([[0.1, 0.5, 0.9]], [0], [0, 1, 2], [1, 1, 1], 1.0),
    ([[0.1, 0.2, 0.3, 0.4]], [0], [0, 1, 0, 2], [1, 1, 1, 1], 5 / 6),
    ([[0.1, 0.2], [0.1, 0.2]], [0, 1], [0, 1], [0.5, 1.0], 0.75),
    ([[0.1, 0.2, 0.3, 0.4]], [0], [1, 2, 3, 0], [0, 0, 0, 1], 0.25),
    ([[0.5, 0.5, 0.5]], [0], [1, 0, 2], [0, 1, 1], 0.5),
    ([[0.9, 0.1, 0.5]], [0], [0, 1, 0], [0, 1, 1], 7 / 12),
    ([[0.3, 0.1, 0.2]], [0], [0, 0, 0], [1, 1, 1], 1.0),
    ([[0.2, 0.1, 0.3], [0.1, 0.2, 0.3], [0.3, 0.2, 0.1]], [0, 1, 2], [0, 1, 2], [1 / 3, 1, 1], 2 / 3),
    ([[0.1, 0.2, 0.3, 0.4, 0.5]], [0], [1, 0, 2, 3, 0], [0, 1, 1, 1, 1], 0.45),
    ([[0.4, 0.3, 0.2, 0.1]], [0], [0, 1, 2, 3], [0, 0, 0, 1], 0.25),
]


@pytest.mark.parametrize("dist,q_pids,g_pids,cmc,mean_ap", HAND_CASES)
def test_hand_enumerated_cases(dist, q_pids, g_pids, cmc, mean_ap):
    """CMC and mAP match hand-computed values."""
    report = _evaluate(dist, q_pids, g_pids)
    assert report.cmc.tolist() == pytest.approx(cmc, abs=1e-12)
    assert report.mAP == pytest.approx(mean_ap, abs=1e-12)
    oracle_cmc, oracle_map = oracles.cmc_and_map(dist, q_pids, g_pids)
    assert report.cmc.tolist() == pytest.approx(oracle_cmc, abs=1e-12)
    assert report.mAP == pytest.approx(oracle_map, abs=1e-12)


def test_same_camera_exclusion():
    """Excluding same identity and camera entries drops them before scoring."""
    dist = [[0.1, 0.3, 0.2]]
    kept = _evaluate(dist, [0], [0, 0, 1], q_cams=[0], g_cams=[0, 1, 1])
    assert kept.mAP == pytest.approx(5 / 6)
    excluded = _evaluate(dist, [0], [0, 0, 1], q_cams=[0], g_cams=[0, 1, 1], exclude_same_camera=True)
    assert excluded.mAP == pytest.approx(0.5)
    assert excluded.cmc.tolist() == [0.0, 1.0, 1.0]


def test_query_without_positive_is_skipped():
    """Queries without a positive are counted and left out of the averages."""
    report = _evaluate([[0.1, 0.2], [0.1, 0.2]], [0, 5], [0, 1])
    assert report.num_skipped == 1
    assert report.mAP == 1.0
    assert report.cmc.tolist() == [1.0, 1.0]
    assert math.isnan(report.per_query_ap[1])
    assert report_to_dict(report)["per_query_ap"] == [1.0, None]


def test_all_queries_skipped():
    """No valid query at all is an evaluation error."""
    with pytest.raises(EmptyEvaluationError) as err:
        _evaluate([[0.1, 0.2]], [7], [0, 1])
    assert err.value.exit_code == 3


def test_shape_mismatch():
    """The distance matrix must match the split."""
    split = from_distances(np.zeros((2, 3)), [0, 1], [0, 1, 2])
    with pytest.raises(InvalidInputError):
        evaluate(DistanceMatrix(np.zeros((3, 2)), ["a", "b", "c"], ["d", "e"]), split)


@pytest.mark.parametrize("seed", range(20))
def test_rank_invariance_under_monotone_transform(seed):
    """Strictly increasing transforms of the distances leave the report unchanged."""
    rng = np.random.default_rng(seed)
    dist = rng.uniform(0.0, 10.0, size=(6, 9))
    q_pids = list(rng.integers(0, 3, size=6))
    g_pids = [j % 3 for j in range(9)]
    report = _evaluate(dist, q_pids, g_pids)
    for transform in (np.sqrt, lambda d: 2.0 * d + 1.0, np.exp):
        other = _evaluate(transform(dist), q_pids, g_pids)
        assert np.array_equal(report.cmc, other.cmc)
        assert report.mAP == other.mAP


def test_gallery_permutation_keeps_map():
    """Reordering the gallery changes nothing when distances have no ties."""
    rng = np.random.default_rng(3)
    dist = rng.uniform(size=(5, 8))
    g_pids = [j % 4 for j in range(8)]
    perm = rng.permutation(8)
    base = _evaluate(dist, [0, 1, 2, 3, 0], g_pids)
    shuffled = _evaluate(dist[:, perm], [0, 1, 2, 3, 0], [g_pids[j] for j in perm])
    assert shuffled.mAP == pytest.approx(base.mAP, abs=1e-12)
    assert np.allclose(shuffled.cmc, base.cmc)


@pytest.mark.parametrize("num_gallery", [2, 5, 11])
def test_worst_single_positive(num_gallery):
    """A single positive ranked last scores AP = 1/N."""
    dist = [list(range(num_gallery))]
    g_pids = list(range(1, num_gallery)) + [0]
    assert _evaluate(dist, [0], g_pids).mAP == pytest.approx(1.0 / num_gallery)


def test_cmc_bounds_and_monotonicity():
    """CMC is non-decreasing, within [0, 1] and reaches 1."""
    rng = np.random.default_rng(9)
    report = _evaluate(rng.uniform(size=(10, 12)), [i % 4 for i in range(10)], [j % 4 for j in range(12)])
    assert np.all(np.diff(report.cmc) >= 0)
    assert report.cmc.min() >= 0 and report.cmc[-1] == 1.0
    assert 0.0 <= report.mAP <= 1.0
    assert report.rank(50) == 1.0


def test_average_precision_helper():
    """Precision-at-positive averaging on a raw hit vector."""
    assert average_precision(np.array([True, False, True, False])) == pytest.approx(5 / 6)
    assert math.isnan(average_precision(np.array([False, False])))


def test_report_json_is_stable():
    """Report JSON sorts keys, fixes six decimals and leaves out timings."""
    report = _evaluate([[0.1, 0.2, 0.3]], [0], [1, 0, 0])
    report.timing_ms["total"] = 12.3456789
    text = reports_to_json([report])
    payload = json.loads(text)["reports"][0]
    assert "timing_ms" not in payload
    assert payload["mAP"] == pytest.approx(round(7 / 12, 6))
    assert text == reports_to_json([report])
    assert list(payload) == sorted(payload)
    assert payload["ranks"]["rank1"] == 0.0 and payload["ranks"]["rank20"] == 1.0
    assert report_to_dict(report, include_timing=True)["timing_ms"]["total"] == 12.345679


def test_report_echoes_config():
    """The re-ranking configuration is echoed into the report."""
    split = from_distances(np.zeros((1, 2)), [0], [0, 1])
    report = evaluate(DistanceMatrix([[0.1, 0.2]], split.query_ids, split.gallery_ids), split,
                      mode="kreciprocal", config=RerankConfig())
    assert report_to_dict(report)["config"]["k1"] == 5
    assert "mode" not in report_to_dict(report)
    assert report_to_dict(report, include_mode=True)["mode"] == "kreciprocal"


def test_table_layout():
    """The table shows ranks 1/5/10/20 and mAP as percentages."""
    report = _evaluate([[0.1, 0.2]], [0], [0, 1])
    table = format_table([report])
    assert "Rank1" in table and "Rank20" in table and "mAP" in table
    assert "Visible to Infrared" in table
    assert "100.00" in table
