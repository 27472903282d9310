"""Dense squared-Euclidean distances between pooled embeddings."""
from __future__ import annotations

from typing import Optional

import numpy as np

from .embedding import pool_matrix
from .errors import InvalidInputError
from .log import get_logger
from .models import DistanceMatrix, EvalSplit

logger = get_logger(__name__)

# Gram values below this fraction of ||x||^2 + ||y||^2 are within cancellation
# error and are recomputed in difference form.
_REFINE_RTOL = 1e-8


def _check_pair(x: np.ndarray, y: np.ndarray) -> None:
	if x.ndim != 2 or y.ndim != 2:
		raise InvalidInputError(f"expected 2-D embedding matrices, got {x.shape} and {y.shape}", stage="distance")
	if x.shape[1] != y.shape[1]:
		raise InvalidInputError(
			f"embedding dimensions differ: {x.shape[1]} vs {y.shape[1]}", stage="distance"
		)


def pairwise_sq_euclidean(x: np.ndarray, y: Optional[np.ndarray] = None) -> np.ndarray:
	"""``||x_i||^2 + ||y_j||^2 - 2 x_i.y_j`` clamped at zero.

	Pairs close enough for cancellation to matter are recomputed as
	``sum((x_i - y_j)^2)``, so equal rows give exactly zero. When ``y`` is
	omitted the result is the symmetric self-distance matrix with an exact
	zero diagonal.
	"""
	symmetric = y is None
	x = np.asarray(x, dtype=np.float64)
	y = x if y is None else np.asarray(y, dtype=np.float64)
	_check_pair(x, y)
	x_sq = np.einsum("ij,ij->i", x, x)
	y_sq = np.einsum("ij,ij->i", y, y)

	dist = np.maximum(x_sq[:, None] + y_sq[None, :] - 2.0 * (x @ y.T), 0.0)
	rows, cols = np.nonzero(dist <= _REFINE_RTOL * (x_sq[:, None] + y_sq[None, :]))
	if rows.size:
		diff = x[rows] - y[cols]
		dist[rows, cols] = np.einsum("ij,ij->i", diff, diff)
	if symmetric:
		dist = 0.5 * (dist + dist.T)
		np.fill_diagonal(dist, 0.0)
	return dist


def direct_sq_euclidean(x: np.ndarray, y: np.ndarray) -> np.ndarray:
	"""Difference-form reference: ``sum((x_i - y_j)^2)`` per pair."""
	x = np.asarray(x, dtype=np.float64)
	y = np.asarray(y, dtype=np.float64)
	_check_pair(x, y)
	diff = x[:, None, :] - y[None, :, :]
	return np.einsum("ijk,ijk->ij", diff, diff)


def feature_distances(split: EvalSplit) -> DistanceMatrix:
	"""Query x gallery squared Euclidean distances of pooled embeddings."""
	queries = pool_matrix(split.queries)
	gallery = pool_matrix(split.gallery)
	values = pairwise_sq_euclidean(queries, gallery)
	logger.debug("feature distances %s (D=%d)", values.shape, queries.shape[1])
	return DistanceMatrix(values, split.query_ids, split.gallery_ids, kind="feature")


def euclidean_view(matrix: DistanceMatrix) -> DistanceMatrix:
	"""Unsquared distances; ranking-equivalent to the squared form."""
	return DistanceMatrix(np.sqrt(matrix.values), matrix.row_ids, matrix.col_ids, kind=matrix.kind + "-euclidean")


__all__ = ["pairwise_sq_euclidean", "direct_sq_euclidean", "feature_distances", "euclidean_view"]
