"""Core data models.

All models are frozen dataclasses holding read-only numpy arrays, so they can
be shared across worker threads without copying.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .enums import Modality, RetrievalDirection
from .errors import (
	DimensionMismatchError,
	InvalidInputError,
	ModalityDirectionError,
)


def _readonly(array: np.ndarray) -> np.ndarray:
	if array.flags.writeable:
		array = array.copy()
		array.setflags(write=False)
	return array


@dataclass(frozen=True, eq=False)
class TrackletRecord:
	tracklet_id: str
	person_id: int
	camera_id: int
	modality: Modality
	frames: np.ndarray

	def __post_init__(self):
		frames = np.asarray(self.frames)
		if frames.ndim != 2:
			raise InvalidInputError(
				f"tracklet {self.tracklet_id!r}: frames must be a T x D matrix, got shape {frames.shape}",
				stage="pool",
			)
		if frames.shape[0] < 1 or frames.shape[1] < 1:
			raise InvalidInputError(
				f"tracklet {self.tracklet_id!r}: empty frame matrix {frames.shape}", stage="pool"
			)
		if not np.issubdtype(frames.dtype, np.floating):
			frames = frames.astype(np.float64)
		if not np.all(np.isfinite(frames)):
			raise InvalidInputError(
				f"tracklet {self.tracklet_id!r}: frames contain NaN or Inf", stage="pool"
			)
		object.__setattr__(self, "modality", Modality(self.modality))
		for name in ("person_id", "camera_id"):
			value = getattr(self, name)
			if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
				raise InvalidInputError(
					f"tracklet {self.tracklet_id!r}: {name} must be an integer, got {value!r}", stage="pool"
				)
			object.__setattr__(self, name, int(value))
		object.__setattr__(self, "frames", _readonly(frames))

	@property
	def num_frames(self) -> int:
		return int(self.frames.shape[0])

	@property
	def feature_dim(self) -> int:
		return int(self.frames.shape[1])


@dataclass(frozen=True, eq=False)
class PooledEmbedding:
	vector: np.ndarray

	def __post_init__(self):
		vector = np.asarray(self.vector, dtype=np.float64)
		if vector.ndim != 1 or vector.size < 1:
			raise InvalidInputError(f"embedding must be a non-empty vector, got shape {vector.shape}")
		if not np.all(np.isfinite(vector)):
			raise InvalidInputError("embedding contains NaN or Inf")
		object.__setattr__(self, "vector", _readonly(vector))

	@property
	def dim(self) -> int:
		return int(self.vector.shape[0])


@dataclass(frozen=True, eq=False)
class SubTrackletEmbeddings:
	"""L group embeddings of one tracklet, in temporal order.

	``group_bounds`` holds 0-based half-open frame ranges ``(start, stop)``.
	"""
	groups: Tuple[PooledEmbedding, ...]
	group_bounds: Tuple[Tuple[int, int], ...]

	@property
	def num_groups(self) -> int:
		return len(self.groups)

	@property
	def group_sizes(self) -> Tuple[int, ...]:
		return tuple(stop - start for start, stop in self.group_bounds)

	def matrix(self) -> np.ndarray:
		return np.stack([g.vector for g in self.groups])


@dataclass(frozen=True, eq=False)
class EvalSplit:
	queries: Tuple[TrackletRecord, ...]
	gallery: Tuple[TrackletRecord, ...]
	direction: RetrievalDirection

	def __post_init__(self):
		object.__setattr__(self, "queries", tuple(self.queries))
		object.__setattr__(self, "gallery", tuple(self.gallery))
		object.__setattr__(self, "direction", RetrievalDirection(self.direction))
		if not self.queries or not self.gallery:
			raise InvalidInputError(
				f"split needs at least one query and one gallery record "
				f"(got M={len(self.queries)}, N={len(self.gallery)})"
			)
		expected_q = self.direction.query_modality
		expected_g = self.direction.gallery_modality
		for record in self.queries:
			if record.modality is not expected_q:
				raise ModalityDirectionError(
					f"query {record.tracklet_id!r} is {record.modality.value} but direction "
					f"{self.direction.value} requires {expected_q.value} queries"
				)
		for record in self.gallery:
			if record.modality is not expected_g:
				raise ModalityDirectionError(
					f"gallery {record.tracklet_id!r} is {record.modality.value} but direction "
					f"{self.direction.value} requires {expected_g.value} gallery"
				)
		dims = {r.feature_dim for r in self.queries + self.gallery}
		if len(dims) != 1:
			raise DimensionMismatchError(f"records disagree on feature dimension: {sorted(dims)}")

	@property
	def feature_dim(self) -> int:
		return self.queries[0].feature_dim

	@property
	def num_queries(self) -> int:
		return len(self.queries)

	@property
	def num_gallery(self) -> int:
		return len(self.gallery)

	@property
	def query_ids(self) -> Tuple[str, ...]:
		return tuple(r.tracklet_id for r in self.queries)

	@property
	def gallery_ids(self) -> Tuple[str, ...]:
		return tuple(r.tracklet_id for r in self.gallery)

	def labels(self) -> Dict[str, np.ndarray]:
		return {
			"q_pids": np.array([r.person_id for r in self.queries], dtype=np.int64),
			"g_pids": np.array([r.person_id for r in self.gallery], dtype=np.int64),
			"q_camids": np.array([r.camera_id for r in self.queries], dtype=np.int64),
			"g_camids": np.array([r.camera_id for r in self.gallery], dtype=np.int64),
		}

	def reversed(self) -> "EvalSplit":
		"""The same records retrieved in the opposite direction."""
		return EvalSplit(queries=self.gallery, gallery=self.queries, direction=self.direction.opposite)


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
	values: np.ndarray
	row_ids: Tuple[str, ...]
	col_ids: Tuple[str, ...]
	kind: str = "feature"

	def __post_init__(self):
		values = np.asarray(self.values, dtype=np.float64)
		object.__setattr__(self, "row_ids", tuple(self.row_ids))
		object.__setattr__(self, "col_ids", tuple(self.col_ids))
		if values.ndim != 2:
			raise InvalidInputError(f"distance matrix must be 2-D, got shape {values.shape}", stage="distance")
		if values.shape != (len(self.row_ids), len(self.col_ids)):
			raise InvalidInputError(
				f"distance matrix shape {values.shape} does not match "
				f"{len(self.row_ids)} rows x {len(self.col_ids)} columns",
				stage="distance",
			)
		if not np.all(np.isfinite(values)):
			raise InvalidInputError("distance matrix contains NaN or Inf", stage="distance")
		if values.size and values.min() < 0:
			raise InvalidInputError("distance matrix contains negative entries", stage="distance")
		object.__setattr__(self, "values", _readonly(values))

	@property
	def shape(self) -> Tuple[int, int]:
		return tuple(self.values.shape)  # type: ignore[return-value]

	def transpose(self) -> "DistanceMatrix":
		return DistanceMatrix(self.values.T, self.col_ids, self.row_ids, kind=self.kind)


@dataclass(frozen=True, eq=False)
class CrossTemporalMatrix:
	values: np.ndarray
	num_groups: int
	row_ids: Tuple[str, ...] = ()
	col_ids: Tuple[str, ...] = ()

	def __post_init__(self):
		values = np.asarray(self.values, dtype=np.float64)
		if values.ndim != 2 or not np.all(np.isfinite(values)):
			raise InvalidInputError("cross-temporal matrix must be a finite 2-D array", stage="temporal")
		if values.size and (values.min() < -1e-9 or values.max() > self.num_groups + 1e-9):
			raise InvalidInputError(
				f"cross-temporal entries must lie in [0, {self.num_groups}]", stage="temporal"
			)
		object.__setattr__(self, "row_ids", tuple(self.row_ids))
		object.__setattr__(self, "col_ids", tuple(self.col_ids))
		object.__setattr__(self, "values", _readonly(values))


@dataclass(frozen=True, eq=False)
class NeighborSets:
	"""Neighbor structure over an anchor/reference population.

	Items ``0..num_anchors-1`` are the anchors, the rest the references. Every
	set excludes the item itself; ``distances`` is the population's pairwise
	distance matrix the sets were derived from.
	"""
	knn: Tuple[np.ndarray, ...]
	kr: Tuple[np.ndarray, ...]
	kr_expanded: Tuple[np.ndarray, ...]
	distances: np.ndarray
	num_anchors: int
	k: int

	@property
	def population(self) -> int:
		return len(self.knn)

	@property
	def num_references(self) -> int:
		return self.population - self.num_anchors


@dataclass(frozen=True, eq=False)
class EvalReport:
	cmc: np.ndarray
	mAP: float
	per_query_ap: np.ndarray
	direction: RetrievalDirection
	num_queries: int
	num_skipped: int
	mode: str = "none"
	config_echo: Optional[object] = None
	timing_ms: Dict[str, float] = field(default_factory=dict)

	def rank(self, n: int) -> float:
		"""CMC value at rank ``n`` (1-based), saturating at the last rank."""
		if n < 1:
			raise InvalidInputError(f"rank must be >= 1, got {n}", stage="evaluate")
		return float(self.cmc[min(n, len(self.cmc)) - 1])


def stack_vectors(embeddings: Sequence[PooledEmbedding]) -> np.ndarray:
	return np.stack([e.vector for e in embeddings]) if embeddings else np.zeros((0, 0))


__all__ = [
	"TrackletRecord",
	"PooledEmbedding",
	"SubTrackletEmbeddings",
	"EvalSplit",
	"DistanceMatrix",
	"CrossTemporalMatrix",
	"NeighborSets",
	"EvalReport",
	"stack_vectors",
]
