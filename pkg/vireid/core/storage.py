"""Embedding exchange format and distance-matrix dumps.

A split directory holds ``manifest.json`` plus one or more headerless blobs of
little-endian float32 frame features in frame-major order::

	{
	  "format_version": 1,
	  "feature_dim": 64,
	  "direction": "visible_to_infrared",      # optional, inferred if absent
	  "records": [
		{"tracklet_id": "...", "person_id": 3, "camera_id": 1,
		 "modality": "RGB", "role": "query", "num_frames": 10,
		 "blob": "features.bin", "offset_bytes": 0,
		 "sha256": "..."}                       # optional integrity check
	  ]
	}

A distance dump is ``<stem>.bin`` (little-endian float64, row-major) with a
``<stem>.json`` shape descriptor.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import numpy as np

from .constants import FormatConstants
from .enums import Modality, RetrievalDirection, Role
from .errors import (
	ChecksumMismatchError,
	DimensionMismatchError,
	ManifestError,
	MissingBlobError,
	NonFiniteFeatureError,
)
from .log import get_logger
from .models import DistanceMatrix, EvalSplit, TrackletRecord

logger = get_logger(__name__)

PathLike = Union[str, Path]
_F4 = np.dtype(FormatConstants.FEATURE_DTYPE)
_F8 = np.dtype(FormatConstants.MATRIX_DTYPE)
_RECORD_KEYS = ("tracklet_id", "person_id", "camera_id", "modality", "role", "num_frames", "blob", "offset_bytes")


def _is_int(value: Any) -> bool:
	return isinstance(value, int) and not isinstance(value, bool)


def record_checksum(record: TrackletRecord) -> str:
	"""sha256 of the record's frames as stored on disk."""
	return hashlib.sha256(np.ascontiguousarray(record.frames, dtype=_F4).tobytes()).hexdigest()


def write_json(payload: Any, path: PathLike) -> Path:
	path = Path(path)
	path.parent.mkdir(parents=True, exist_ok=True)
	path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
	return path


def save_split(split: EvalSplit, directory: PathLike) -> Path:
	"""Write ``split`` to ``directory``; returns the manifest path."""
	directory = Path(directory)
	directory.mkdir(parents=True, exist_ok=True)
	blob_path = directory / FormatConstants.BLOB_NAME
	entries: List[Dict[str, Any]] = []
	offset = 0
	with open(blob_path, "wb") as blob:
		for role, records in ((Role.QUERY, split.queries), (Role.GALLERY, split.gallery)):
			for record in records:
				data = np.ascontiguousarray(record.frames, dtype=_F4).tobytes()
				blob.write(data)
				entries.append({
					"tracklet_id": record.tracklet_id,
					"person_id": record.person_id,
					"camera_id": record.camera_id,
					"modality": record.modality.value,
					"role": role.value,
					"num_frames": record.num_frames,
					"blob": FormatConstants.BLOB_NAME,
					"offset_bytes": offset,
					"sha256": hashlib.sha256(data).hexdigest(),
				})
				offset += len(data)
	manifest = {
		"format_version": FormatConstants.FORMAT_VERSION,
		"feature_dim": split.feature_dim,
		"direction": split.direction.value,
		"records": entries,
	}
	manifest_path = write_json(manifest, directory / FormatConstants.MANIFEST_NAME)
	logger.info("saved %d records (%d bytes) to %s", len(entries), offset, directory)
	return manifest_path


def _read_manifest(manifest_path: Path) -> Dict[str, Any]:
	if not manifest_path.is_file():
		raise ManifestError(f"manifest not found: {manifest_path}")
	try:
		manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
	except (OSError, json.JSONDecodeError) as exc:
		raise ManifestError(f"cannot parse manifest {manifest_path}: {exc}") from exc
	if not isinstance(manifest, dict):
		raise ManifestError("manifest must be a JSON object")
	version = manifest.get("format_version")
	if version != FormatConstants.FORMAT_VERSION:
		raise ManifestError(f"unsupported format_version {version!r}")
	dim = manifest.get("feature_dim")
	if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
		raise ManifestError(f"feature_dim must be a positive integer, got {dim!r}")
	records = manifest.get("records")
	if not isinstance(records, list) or not records:
		raise ManifestError("manifest lists no records")
	seen = set()
	for i, entry in enumerate(records):
		if not isinstance(entry, dict):
			raise ManifestError(f"record #{i} is not an object")
		missing = [k for k in _RECORD_KEYS if k not in entry]
		if missing:
			raise ManifestError(f"record #{i} lacks fields {missing}")
		tid = entry["tracklet_id"]
		if not isinstance(tid, str) or not tid:
			raise ManifestError(f"record #{i}: tracklet_id must be a non-empty string, got {tid!r}")
		if tid in seen:
			raise ManifestError(f"duplicate tracklet_id {tid!r}")
		seen.add(tid)
		for key in ("person_id", "camera_id"):
			if not _is_int(entry[key]):
				raise ManifestError(f"record {tid!r}: {key} must be an integer, got {entry[key]!r}")
		if not isinstance(entry["blob"], str) or not entry["blob"]:
			raise ManifestError(f"record {tid!r}: blob must be a file name")
		if not _is_int(entry["num_frames"]) or entry["num_frames"] < 1:
			raise ManifestError(f"record {tid!r}: num_frames must be a positive integer")
		if not _is_int(entry["offset_bytes"]) or entry["offset_bytes"] < 0:
			raise ManifestError(f"record {tid!r}: offset_bytes must be a non-negative integer")
		try:
			Modality(entry["modality"])
			Role(entry["role"])
		except ValueError as exc:
			raise ManifestError(f"record {tid!r}: {exc}") from None
	return manifest


def _check_blobs(root: Path, records: List[Dict[str, Any]], dim: int) -> Dict[str, Path]:
	rows_per_blob: Dict[str, int] = {}
	for entry in records:
		rows_per_blob[entry["blob"]] = rows_per_blob.get(entry["blob"], 0) + entry["num_frames"]
	paths: Dict[str, Path] = {}
	for name, rows in rows_per_blob.items():
		path = root / name
		if not path.is_file():
			raise MissingBlobError(f"blob {name!r} referenced by the manifest does not exist")
		size = path.stat().st_size
		expected = rows * dim * _F4.itemsize
		if size != expected:
			if size % (rows * _F4.itemsize) == 0:
				columns = size // (rows * _F4.itemsize)
				detail = f"holds {columns} columns"
			else:
				detail = f"holds {size} bytes, not a whole number of {rows}-row matrices"
			raise DimensionMismatchError(
				f"blob {name!r} {detail} but the manifest declares feature_dim={dim} "
				f"({expected} bytes for {rows} frames)"
			)
		paths[name] = path
	return paths


def _read_record(entry: Dict[str, Any], path: Path, dim: int) -> TrackletRecord:
	count = entry["num_frames"] * dim
	if entry["offset_bytes"] + count * _F4.itemsize > path.stat().st_size:
		raise DimensionMismatchError(
			f"record {entry['tracklet_id']!r} extends past the end of blob {entry['blob']!r}"
		)
	frames = np.fromfile(path, dtype=_F4, count=count, offset=entry["offset_bytes"])
	frames = frames.reshape(entry["num_frames"], dim)
	if not np.all(np.isfinite(frames)):
		raise NonFiniteFeatureError(f"record {entry['tracklet_id']!r} contains NaN or Inf features")
	digest = entry.get("sha256")
	if digest is not None and hashlib.sha256(frames.tobytes()).hexdigest() != digest:
		raise ChecksumMismatchError(f"record {entry['tracklet_id']!r} fails its sha256 check")
	return TrackletRecord(
		tracklet_id=entry["tracklet_id"],
		person_id=entry["person_id"],
		camera_id=entry["camera_id"],
		modality=Modality(entry["modality"]),
		frames=frames,
	)


def load_split(manifest_path: PathLike) -> EvalSplit:
	"""Load a split from a manifest file or the directory holding it."""
	manifest_path = Path(manifest_path)
	if manifest_path.is_dir():
		manifest_path = manifest_path / FormatConstants.MANIFEST_NAME
	manifest = _read_manifest(manifest_path)
	dim = manifest["feature_dim"]
	records = manifest["records"]
	blobs = _check_blobs(manifest_path.parent, records, dim)

	queries: List[TrackletRecord] = []
	gallery: List[TrackletRecord] = []
	for entry in records:
		record = _read_record(entry, blobs[entry["blob"]], dim)
		(queries if entry["role"] == Role.QUERY.value else gallery).append(record)
	if not queries or not gallery:
		raise ManifestError(f"split needs queries and gallery (got M={len(queries)}, N={len(gallery)})")

	if "direction" in manifest:
		try:
			direction = RetrievalDirection(manifest["direction"])
		except ValueError:
			raise ManifestError(f"unknown direction {manifest['direction']!r}") from None
	elif queries[0].modality is Modality.RGB:
		direction = RetrievalDirection.VISIBLE_TO_INFRARED
	else:
		direction = RetrievalDirection.INFRARED_TO_VISIBLE
	split = EvalSplit(queries=tuple(queries), gallery=tuple(gallery), direction=direction)
	logger.info("loaded %d queries and %d gallery records (D=%d) from %s",
				split.num_queries, split.num_gallery, dim, manifest_path)
	return split


def dump_matrix(matrix: DistanceMatrix, stem: PathLike) -> Tuple[Path, Path]:
	stem = Path(stem)
	stem.parent.mkdir(parents=True, exist_ok=True)
	bin_path = stem.with_name(stem.name + ".bin")
	json_path = stem.with_name(stem.name + ".json")
	bin_path.write_bytes(np.ascontiguousarray(matrix.values, dtype=_F8).tobytes())
	write_json({
		"rows": matrix.shape[0],
		"cols": matrix.shape[1],
		"dtype": FormatConstants.MATRIX_DTYPE,
		"order": "row-major",
		"kind": matrix.kind,
		"row_ids": list(matrix.row_ids),
		"col_ids": list(matrix.col_ids),
	}, json_path)
	return bin_path, json_path


def load_matrix(stem: PathLike) -> DistanceMatrix:
	stem = Path(stem)
	json_path = stem.with_name(stem.name + ".json")
	bin_path = stem.with_name(stem.name + ".bin")
	if not json_path.is_file():
		raise ManifestError(f"matrix descriptor not found: {json_path}")
	if not bin_path.is_file():
		raise MissingBlobError(f"matrix blob not found: {bin_path}")
	try:
		meta = json.loads(json_path.read_text(encoding="utf-8"))
		rows, cols = int(meta["rows"]), int(meta["cols"])
	except (KeyError, ValueError, TypeError, json.JSONDecodeError) as exc:
		raise ManifestError(f"malformed matrix descriptor {json_path}: {exc}") from exc
	values = np.fromfile(bin_path, dtype=_F8)
	if values.size != rows * cols:
		raise DimensionMismatchError(
			f"matrix blob holds {values.size} values, descriptor declares {rows}x{cols}"
		)
	return DistanceMatrix(
		values.reshape(rows, cols),
		meta.get("row_ids") or [str(i) for i in range(rows)],
		meta.get("col_ids") or [str(j) for j in range(cols)],
		kind=meta.get("kind", "feature"),
	)


__all__ = [
	"record_checksum",
	"write_json",
	"save_split",
	"load_split",
	"dump_matrix",
	"load_matrix",
]
