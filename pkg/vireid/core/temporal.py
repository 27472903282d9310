"""Temporal k-reciprocal re-ranking.

Every tracklet is split into L temporal groups. The cross-temporal term pairs
query group ``l`` with gallery group ``L-1-l`` and accumulates the Jaccard
distances of the L group-pair populations:

	d_cross(i, j) = sum_l d_jacc(q_i^l, g_j^(L-1-l))
	d_rerank      = lambda1 * d_feat + (1 - lambda1) * d_jacc + lambda2 * d_cross
"""
from __future__ import annotations

import time

import numpy as np

from .config import RerankConfig
from .distance import feature_distances
from .embedding import group_matrix
from .errors import InvalidInputError
from .kreciprocal import fuse, instance_jaccard, population_jaccard
from .log import get_logger
from .models import CrossTemporalMatrix, DistanceMatrix, EvalSplit
from .parallel import ordered_map

logger = get_logger(__name__)


def _check_lengths(split: EvalSplit, num_groups: int) -> None:
	for record in split.queries + split.gallery:
		if record.num_frames < num_groups:
			raise InvalidInputError(
				f"tracklet {record.tracklet_id!r} has {record.num_frames} frames, fewer than L={num_groups}",
				stage="temporal",
			)


def cross_temporal(split: EvalSplit, config: RerankConfig, threads: int = 1) -> CrossTemporalMatrix:
	num_groups = config.num_groups
	_check_lengths(split, num_groups)
	inner_threads = max(1, threads // num_groups)

	def group_pair(l: int) -> np.ndarray:
		anchors = group_matrix(split.queries, num_groups, l)
		references = group_matrix(split.gallery, num_groups, num_groups - 1 - l)
		_, jacc = population_jaccard(
			anchors, references, config, split.query_ids, split.gallery_ids, threads=inner_threads
		)
		return jacc.values

	started = time.perf_counter()
	per_pair = ordered_map(group_pair, range(num_groups), threads)
	total = np.zeros((split.num_queries, split.num_gallery), dtype=np.float64)
	for values in per_pair:
		total += values
	logger.info("cross-temporal term over L=%d groups in %.1f ms",
				num_groups, 1000.0 * (time.perf_counter() - started))
	return CrossTemporalMatrix(total, num_groups, split.query_ids, split.gallery_ids)


def temporal_rerank(split: EvalSplit, config: RerankConfig, threads: int = 1) -> DistanceMatrix:
	base = feature_distances(split)
	jacc = instance_jaccard(split, config, threads=threads)
	fused = fuse(base, jacc, config.lambda1)
	cross = cross_temporal(split, config, threads=threads)
	values = fused.values + config.lambda2 * cross.values
	return DistanceMatrix(values, split.query_ids, split.gallery_ids, kind="rerank")


__all__ = ["cross_temporal", "temporal_rerank"]
