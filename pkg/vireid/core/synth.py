"""Seeded synthetic cross-modality tracklet embeddings.

Every identity appears in ``cams_per_id`` bimodal cameras and yields one RGB
and one IR tracklet per camera. A tracklet's frames are

	B @ (center_id + modality_offset_(id, modality) + camera_offset_(id, camera)) + noise_frame

where ``B`` is a fixed random D x latent_dim embedding, latent parts are
isotropic Gaussians scaled so that their expected L2 norm equals the
configured scale, and frame noise is isotropic in all D dimensions.

Randomness comes from numpy's PCG64 generator. Each quantity draws from its
own stream, ``SeedSequence(seed, spawn_key=key)`` with keys

	(0,)                       embedding matrix B
	(1, id)                    identity center
	(2, id, modality)          modality offset  (modality 0 = RGB, 1 = IR)
	(3, id, camera)            camera offset
	(4, id, camera, modality)  frame noise of that tracklet

so a record's values do not depend on generation order.
"""
from __future__ import annotations

import math
from typing import List

import numpy as np

from .config import SynthConfig
from .enums import Modality
from .log import get_logger
from .models import EvalSplit, TrackletRecord

logger = get_logger(__name__)

_MODALITY_CODE = {Modality.RGB: 0, Modality.IR: 1}


def stream(seed: int, *key: int) -> np.random.Generator:
	return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def _latent(config: SynthConfig, scale: float, *key: int) -> np.ndarray:
	if scale == 0:
		return np.zeros(config.latent_dim)
	return stream(config.seed, *key).standard_normal(config.latent_dim) * (scale / math.sqrt(config.latent_dim))


def generate(config: SynthConfig) -> EvalSplit:
	embed = stream(config.seed, 0).standard_normal((config.dim, config.latent_dim)) / math.sqrt(config.dim)
	noise_scale = config.frame_noise / math.sqrt(config.dim)
	queries: List[TrackletRecord] = []
	gallery: List[TrackletRecord] = []
	query_modality = config.direction.query_modality
	for pid in range(config.num_ids):
		center = _latent(config, config.identity_spread, 1, pid)
		modality_offsets = {
			m: _latent(config, config.modality_offset_scale, 2, pid, code) for m, code in _MODALITY_CODE.items()
		}
		for cam in range(config.cams_per_id):
			camera_offset = _latent(config, config.camera_offset_scale, 3, pid, cam)
			for modality, code in _MODALITY_CODE.items():
				mean = embed @ (center + modality_offsets[modality] + camera_offset)
				frames = np.repeat(mean[None, :], config.frames_per_tracklet, axis=0)
				if noise_scale > 0:
					noise = stream(config.seed, 4, pid, cam, code).standard_normal(
						(config.frames_per_tracklet, config.dim)
					)
					frames = frames + noise * noise_scale
				record = TrackletRecord(
					tracklet_id=f"id{pid:04d}_c{cam}_{modality.value}",
					person_id=pid,
					camera_id=cam,
					modality=modality,
					frames=frames.astype(np.float32),
				)
				(queries if modality is query_modality else gallery).append(record)
	logger.info("generated %d queries / %d gallery tracklets (seed=%d, D=%d, T=%d)",
				len(queries), len(gallery), config.seed, config.dim, config.frames_per_tracklet)
	return EvalSplit(queries=tuple(queries), gallery=tuple(gallery), direction=config.direction)


__all__ = ["stream", "generate"]
