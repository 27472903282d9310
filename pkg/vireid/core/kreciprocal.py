"""Instance-level k-reciprocal re-ranking.

Neighbor search runs over the joint population of anchors and references
(queries followed by gallery). Each item ranks itself first; ties in distance
are broken by ascending item index.

The Jaccard distance uses the vector encoding: every item's expanded
reciprocal set, the item itself included, becomes a row of weights
``exp(-d)`` normalised to sum to one. Intersection and union of two soft sets
are the element-wise minimum and maximum of their rows.
"""
from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import RerankConfig
from .distance import feature_distances, pairwise_sq_euclidean
from .embedding import pool_matrix
from .errors import ConfigError, InvalidInputError
from .log import get_logger
from .models import DistanceMatrix, EvalSplit, NeighborSets, PooledEmbedding, stack_vectors
from .parallel import chunk_ranges, ordered_map

logger = get_logger(__name__)

EmbeddingsLike = Union[np.ndarray, Sequence[PooledEmbedding]]


def _as_matrix(embeddings: EmbeddingsLike) -> np.ndarray:
	if isinstance(embeddings, np.ndarray):
		return np.asarray(embeddings, dtype=np.float64)
	return stack_vectors(list(embeddings))


def rank_population(distances: np.ndarray, depth: int) -> np.ndarray:
	"""First ``depth`` columns of each item's ranking, the item itself first."""
	ranked = np.array(distances, dtype=np.float64, copy=True)
	np.fill_diagonal(ranked, -np.inf)
	return np.argsort(ranked, axis=1, kind="stable")[:, :depth]


def _reciprocal(order: np.ndarray, k: int) -> List[np.ndarray]:
	"""Self-inclusive k-reciprocal sets, in neighbor order."""
	population = order.shape[0]
	top = order[:, :k + 1]
	member = np.zeros((population, population), dtype=bool)
	member[np.arange(population)[:, None], top] = True
	mutual = member & member.T
	return [top[p][mutual[p, top[p]]] for p in range(population)]


def reciprocal_sets(anchors: EmbeddingsLike, references: EmbeddingsLike, k1: int) -> NeighborSets:
	"""k-nearest, k-reciprocal and expanded k-reciprocal sets of every item.

	A candidate ``g`` in ``R(p, k1)`` contributes ``R(g, ceil(k1/2))`` when at
	least two thirds of that smaller set already lies in ``R(p, k1)``.
	"""
	anchor_matrix = _as_matrix(anchors)
	reference_matrix = _as_matrix(references)
	if anchor_matrix.shape[0] < 1 or reference_matrix.shape[0] < 1:
		raise InvalidInputError("neighbor search needs at least one anchor and one reference", stage="rerank")
	population = np.vstack([anchor_matrix, reference_matrix])
	size = population.shape[0]
	if int(k1) != k1 or k1 < 1:
		raise ConfigError(f"k1 must be a positive integer, got {k1}", stage="rerank")
	if size < k1 + 1:
		raise ConfigError(f"population of {size} items is smaller than k1+1={k1 + 1}", stage="rerank")

	distances = pairwise_sq_euclidean(population)
	order = rank_population(distances, k1 + 1)
	half = int(math.ceil(k1 / 2))
	full_sets = _reciprocal(order, k1)
	half_sets = _reciprocal(order, half)

	kr: List[np.ndarray] = []
	expanded: List[np.ndarray] = []
	for p in range(size):
		own = full_sets[p]
		own_members = set(own.tolist())
		merged = [own]
		for g in own:
			if g == p:
				continue
			candidate = half_sets[g]
			overlap = sum(1 for c in candidate.tolist() if c in own_members)
			if 3 * overlap >= 2 * len(candidate):
				merged.append(candidate)
		union = np.unique(np.concatenate(merged))
		kr.append(own[own != p])
		expanded.append(union[union != p])

	knn = tuple(order[p, 1:] for p in range(size))
	logger.debug("reciprocal sets: population=%d k1=%d mean |R|=%.2f mean |R*|=%.2f",
				 size, k1, np.mean([len(s) for s in kr]), np.mean([len(s) for s in expanded]))
	return NeighborSets(
		knn=knn,
		kr=tuple(kr),
		kr_expanded=tuple(expanded),
		distances=distances,
		num_anchors=anchor_matrix.shape[0],
		k=int(k1),
	)


def encode_sets(sets: NeighborSets, k2: int, expanded: bool = True) -> np.ndarray:
	"""Soft membership rows, averaged over each item's ``k2`` nearest items."""
	size = sets.population
	encoding = np.zeros((size, size), dtype=np.float64)
	members_of = sets.kr_expanded if expanded else sets.kr
	for p in range(size):
		members = np.concatenate([[p], members_of[p]]).astype(np.int64)
		weights = np.exp(-sets.distances[p, members])
		encoding[p, members] = weights / weights.sum()
	if k2 == 1:
		return encoding
	averaged = np.empty_like(encoding)
	for p in range(size):
		neighbors = np.concatenate([[p], sets.knn[p][:k2 - 1]]).astype(np.int64)
		averaged[p] = encoding[neighbors].mean(axis=0)
	return averaged


def jaccard_distances(
	sets: NeighborSets,
	base: DistanceMatrix,
	k2: int,
	expanded: bool = True,
	threads: int = 1,
) -> DistanceMatrix:
	"""Anchor x reference Jaccard distances of the encoded reciprocal sets."""
	if int(k2) != k2 or k2 < 1:
		raise ConfigError(f"k2 must be a positive integer, got {k2}", stage="rerank")
	if k2 > sets.k:
		raise ConfigError(f"k2 ({k2}) must not exceed k1 ({sets.k})", stage="rerank")
	if base.shape != (sets.num_anchors, sets.num_references):
		raise InvalidInputError(
			f"base distances {base.shape} do not match the neighbor population "
			f"({sets.num_anchors} anchors, {sets.num_references} references)",
			stage="rerank",
		)
	encoding = encode_sets(sets, k2, expanded=expanded)
	anchors = sets.num_anchors
	references = encoding[anchors:]
	totals = encoding.sum(axis=1)
	reference_totals = totals[anchors:]

	def rows(block: range) -> np.ndarray:
		out = np.empty((len(block), references.shape[0]), dtype=np.float64)
		for r, i in enumerate(block):
			support = np.flatnonzero(encoding[i])
			overlap = np.minimum(references[:, support], encoding[i, support]).sum(axis=1)
			out[r] = 1.0 - overlap / (totals[i] + reference_totals - overlap)
		return out

	values = np.vstack(ordered_map(rows, chunk_ranges(anchors, threads), threads))
	return DistanceMatrix(np.clip(values, 0.0, 1.0), base.row_ids, base.col_ids, kind="jaccard")


def fuse(base: DistanceMatrix, jacc: DistanceMatrix, lambda1: float) -> DistanceMatrix:
	"""``lambda1 * base + (1 - lambda1) * jacc``."""
	if base.shape != jacc.shape:
		raise InvalidInputError(f"cannot fuse matrices of shape {base.shape} and {jacc.shape}", stage="rerank")
	if not 0.0 <= lambda1 <= 1.0:
		raise ConfigError(f"lambda1 must lie in [0, 1], got {lambda1}", stage="rerank")
	values = lambda1 * base.values + (1.0 - lambda1) * jacc.values
	return DistanceMatrix(values, base.row_ids, base.col_ids, kind="rerank")


def population_jaccard(
	anchors: np.ndarray,
	references: np.ndarray,
	config: RerankConfig,
	row_ids: Optional[Sequence[str]] = None,
	col_ids: Optional[Sequence[str]] = None,
	threads: int = 1,
) -> Tuple[NeighborSets, DistanceMatrix]:
	"""Reciprocal sets plus Jaccard distances for one anchor/reference population."""
	sets = reciprocal_sets(anchors, references, config.k1)
	row_ids = tuple(row_ids) if row_ids is not None else tuple(str(i) for i in range(len(anchors)))
	col_ids = tuple(col_ids) if col_ids is not None else tuple(str(j) for j in range(len(references)))
	block = DistanceMatrix(sets.distances[:sets.num_anchors, sets.num_anchors:], row_ids, col_ids)
	return sets, jaccard_distances(sets, block, config.k2, expanded=config.expanded, threads=threads)


def instance_jaccard(split: EvalSplit, config: RerankConfig, threads: int = 1) -> DistanceMatrix:
	"""Jaccard distances over the pooled query and gallery embeddings."""
	_, jacc = population_jaccard(
		pool_matrix(split.queries), pool_matrix(split.gallery), config,
		split.query_ids, split.gallery_ids, threads=threads,
	)
	return jacc


def kreciprocal_rerank(split: EvalSplit, config: RerankConfig, threads: int = 1) -> DistanceMatrix:
	base = feature_distances(split)
	jacc = instance_jaccard(split, config, threads=threads)
	return fuse(base, jacc, config.lambda1)


__all__ = [
	"rank_population",
	"reciprocal_sets",
	"encode_sets",
	"jaccard_distances",
	"fuse",
	"population_jaccard",
	"instance_jaccard",
	"kreciprocal_rerank",
]
