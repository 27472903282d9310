"""Tracklet aggregation: temporal average pooling and temporal grouping."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ConfigError, InvalidInputError
from .log import get_logger
from .models import PooledEmbedding, SubTrackletEmbeddings, TrackletRecord
from .parallel import chunk_ranges

logger = get_logger(__name__)


def _frames_of(record: TrackletRecord) -> np.ndarray:
	frames = np.asarray(record.frames)
	if frames.ndim != 2 or frames.shape[0] < 1 or frames.shape[1] < 1:
		raise InvalidInputError(
			f"tracklet {record.tracklet_id!r}: empty or malformed frame matrix {frames.shape}", stage="pool"
		)
	return frames


def temporal_pool(record: TrackletRecord) -> PooledEmbedding:
	"""Mean over frames, accumulated in float64."""
	frames = _frames_of(record)
	return PooledEmbedding(frames.mean(axis=0, dtype=np.float64))


def split_temporal(record: TrackletRecord, num_groups: int) -> SubTrackletEmbeddings:
	"""Split a tracklet into ``num_groups`` contiguous groups and pool each.

	Remainder frames go to the earliest groups, so group sizes differ by at
	most one.
	"""
	frames = _frames_of(record)
	num_frames = frames.shape[0]
	if int(num_groups) != num_groups or num_groups < 1:
		raise ConfigError(f"L must be a positive integer, got {num_groups}", stage="pool")
	if num_groups > num_frames:
		raise ConfigError(
			f"tracklet {record.tracklet_id!r} has {num_frames} frames, fewer than L={num_groups}",
			stage="pool",
		)
	bounds = tuple((r.start, r.stop) for r in chunk_ranges(num_frames, num_groups))
	groups = tuple(
		PooledEmbedding(frames[start:stop].mean(axis=0, dtype=np.float64)) for start, stop in bounds
	)
	return SubTrackletEmbeddings(groups=groups, group_bounds=bounds)


def resample_tracklet(record: TrackletRecord, length: int) -> TrackletRecord:
	"""Evenly spaced frame sampling to a fixed tracklet length.

	Shorter tracklets repeat frames (nearest-index sampling).
	"""
	if int(length) != length or length < 1:
		raise ConfigError(f"tracklet length must be a positive integer, got {length}", stage="pool")
	frames = _frames_of(record)
	num_frames = frames.shape[0]
	if num_frames == length:
		return record
	# centers of `length` equal segments, mapped onto frame indices
	positions = (np.arange(length) + 0.5) * num_frames / length
	index = np.minimum(np.floor(positions).astype(np.int64), num_frames - 1)
	return TrackletRecord(
		tracklet_id=record.tracklet_id,
		person_id=record.person_id,
		camera_id=record.camera_id,
		modality=record.modality,
		frames=frames[index],
	)


def pool_matrix(records: Sequence[TrackletRecord]) -> np.ndarray:
	"""Stacked pooled embeddings, one row per record."""
	return np.stack([temporal_pool(r).vector for r in records])


def group_matrix(records: Sequence[TrackletRecord], num_groups: int, group: int) -> np.ndarray:
	"""Stacked embeddings of temporal group ``group`` for every record."""
	rows = []
	for record in records:
		if record.num_frames < num_groups:
			raise InvalidInputError(
				f"tracklet {record.tracklet_id!r} has {record.num_frames} frames, fewer than L={num_groups}",
				stage="temporal",
			)
		rows.append(split_temporal(record, num_groups).groups[group].vector)
	logger.debug("pooled group %d/%d for %d records", group, num_groups, len(records))
	return np.stack(rows)


__all__ = ["temporal_pool", "split_temporal", "resample_tracklet", "pool_matrix", "group_matrix"]
