"""Typed configuration objects, validated on construction."""
from __future__ import annotations

import dataclasses
import math
import numbers
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from .constants import RerankDefaults, RerankPresets, ScheduleDefaults, SynthDefaults
from .enums import RerankMode, RetrievalDirection, ScheduleStrategy
from .errors import ConfigError


def _integer(name: str, value: Any, stage: str) -> int:
	"""Integral floats are accepted; bools and strings are not."""
	if isinstance(value, numbers.Integral) and not isinstance(value, bool):
		return int(value)
	if not isinstance(value, numbers.Real) or isinstance(value, bool) or not float(value).is_integer():
		raise ConfigError(f"{name} must be an integer, got {value!r}", stage=stage)
	return int(value)


def _real(name: str, value: Any, stage: str) -> float:
	if isinstance(value, bool) or not isinstance(value, numbers.Real) or not math.isfinite(value):
		raise ConfigError(f"{name} must be a finite number, got {value!r}", stage=stage)
	return float(value)


@dataclass(frozen=True)
class RerankConfig:
	k1: int = RerankDefaults.K1
	k2: int = RerankDefaults.K2
	lambda1: float = RerankDefaults.LAMBDA1
	lambda2: float = RerankDefaults.LAMBDA2
	num_groups: int = RerankDefaults.NUM_GROUPS
	expanded: bool = True

	def __post_init__(self):
		for name in ("k1", "k2", "num_groups"):
			object.__setattr__(self, name, _integer(name, getattr(self, name), "rerank"))
		for name in ("lambda1", "lambda2"):
			object.__setattr__(self, name, _real(name, getattr(self, name), "rerank"))
		if not isinstance(self.expanded, bool):
			raise ConfigError(f"expanded must be a boolean, got {self.expanded!r}", stage="rerank")
		if self.k1 < 1:
			raise ConfigError(f"k1 must be a positive integer, got {self.k1}", stage="rerank")
		if self.k2 < 1:
			raise ConfigError(f"k2 must be a positive integer, got {self.k2}", stage="rerank")
		if self.k2 > self.k1:
			raise ConfigError(f"k2 ({self.k2}) must not exceed k1 ({self.k1})", stage="rerank")
		if not 0.0 <= self.lambda1 <= 1.0:
			raise ConfigError(f"lambda1 must lie in [0, 1], got {self.lambda1}", stage="rerank")
		if self.lambda2 < 0.0:
			raise ConfigError(f"lambda2 must be >= 0, got {self.lambda2}", stage="rerank")
		if self.num_groups < 1:
			raise ConfigError(f"L must be a positive integer, got {self.num_groups}", stage="rerank")

	@classmethod
	def preset(cls, name: str) -> "RerankConfig":
		presets = {"default": RerankPresets.DEFAULT, "large-gallery": RerankPresets.LARGE_GALLERY}
		try:
			return cls(**presets[name])
		except KeyError:
			raise ConfigError(f"unknown re-ranking preset {name!r}; choose from {sorted(presets)}") from None

	def replace(self, **changes: Any) -> "RerankConfig":
		return dataclasses.replace(self, **changes)

	def to_dict(self) -> Dict[str, Any]:
		return dataclasses.asdict(self)


@dataclass(frozen=True)
class ScheduleConfig:
	"""Curriculum factor schedule.

	``value`` is alpha for FIXED, tau for EXPONENTIAL and phi for COSINE.
	"""
	strategy: ScheduleStrategy = ScheduleStrategy.COSINE
	value: float = ScheduleDefaults.COSINE_PHI

	def __post_init__(self):
		object.__setattr__(self, "strategy", ScheduleStrategy(self.strategy))
		object.__setattr__(self, "value", _real("value", self.value, "schedule"))
		if self.strategy is ScheduleStrategy.FIXED and not 0.0 <= self.value <= 1.0:
			raise ConfigError(f"fixed alpha must lie in [0, 1], got {self.value}", stage="schedule")
		if self.strategy is ScheduleStrategy.EXPONENTIAL and not self.value > 0.0:
			raise ConfigError(f"tau must be positive, got {self.value}", stage="schedule")
		# phi < 1 would drive alpha negative at the end of training
		if self.strategy is ScheduleStrategy.COSINE and not self.value >= 1.0:
			raise ConfigError(f"phi must be >= 1, got {self.value}", stage="schedule")

	@classmethod
	def fixed(cls, alpha: float) -> "ScheduleConfig":
		return cls(ScheduleStrategy.FIXED, alpha)

	@classmethod
	def exponential(cls, tau: float) -> "ScheduleConfig":
		return cls(ScheduleStrategy.EXPONENTIAL, tau)

	@classmethod
	def cosine(cls, phi: float = ScheduleDefaults.COSINE_PHI) -> "ScheduleConfig":
		return cls(ScheduleStrategy.COSINE, phi)

	@property
	def label(self) -> str:
		symbol = {ScheduleStrategy.FIXED: "alpha", ScheduleStrategy.EXPONENTIAL: "tau",
				  ScheduleStrategy.COSINE: "phi"}[self.strategy]
		return f"{self.strategy.value}({symbol}={self.value:g})"


@dataclass(frozen=True)
class SynthConfig:
	"""Synthetic benchmark parameters. All scales are expected L2 norms."""
	seed: int = 0
	num_ids: int = SynthDefaults.NUM_IDS
	cams_per_id: int = SynthDefaults.CAMS_PER_ID
	frames_per_tracklet: int = SynthDefaults.FRAMES_PER_TRACKLET
	dim: int = SynthDefaults.DIM
	identity_spread: float = SynthDefaults.IDENTITY_SPREAD
	modality_offset_scale: float = SynthDefaults.MODALITY_OFFSET_SCALE
	camera_offset_scale: float = SynthDefaults.CAMERA_OFFSET_SCALE
	frame_noise: float = SynthDefaults.FRAME_NOISE
	latent_dim: int = SynthDefaults.LATENT_DIM
	direction: RetrievalDirection = RetrievalDirection.VISIBLE_TO_INFRARED

	def __post_init__(self):
		for name in ("seed", "num_ids", "cams_per_id", "frames_per_tracklet", "dim", "latent_dim"):
			object.__setattr__(self, name, _integer(name, getattr(self, name), "synth"))
		for name in ("identity_spread", "modality_offset_scale", "camera_offset_scale", "frame_noise"):
			object.__setattr__(self, name, _real(name, getattr(self, name), "synth"))
		object.__setattr__(self, "direction", RetrievalDirection(self.direction))
		if not 0 <= self.seed < 2 ** 64:
			raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}", stage="synth")
		checks = [
			(self.num_ids >= 1, "num_ids must be >= 1"),
			(self.cams_per_id >= 1, "cams_per_id must be >= 1"),
			(self.frames_per_tracklet >= 1, "frames_per_tracklet must be >= 1"),
			(self.dim >= 2, "dim must be >= 2"),
			(1 <= self.latent_dim <= self.dim, "latent_dim must lie in [1, dim]"),
			(self.identity_spread > 0, "identity_spread must be > 0"),
			(self.modality_offset_scale >= 0, "modality_offset_scale must be >= 0"),
			(self.camera_offset_scale >= 0, "camera_offset_scale must be >= 0"),
			(self.frame_noise >= 0, "frame_noise must be >= 0"),
		]
		for ok, message in checks:
			if not ok:
				raise ConfigError(message, stage="synth")

	def replace(self, **changes: Any) -> "SynthConfig":
		return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class PipelineConfig:
	"""One end-to-end evaluation run: exactly one of ``input_path`` / ``synth``."""
	input_path: Optional[Path] = None
	synth: Optional[SynthConfig] = None
	mode: RerankMode = RerankMode.TEMPORAL
	rerank: RerankConfig = field(default_factory=RerankConfig)
	both_directions: bool = False
	exclude_same_camera: bool = False
	output_dir: Optional[Path] = None
	dump_distances: bool = False
	plot: bool = False
	threads: int = 1

	def __post_init__(self):
		object.__setattr__(self, "mode", RerankMode(self.mode))
		if (self.input_path is None) == (self.synth is None):
			raise ConfigError("exactly one input source (manifest path or synthetic config) is required",
							  stage="pipeline")
		if self.threads < 1:
			raise ConfigError(f"threads must be >= 1, got {self.threads}", stage="pipeline")
		if self.input_path is not None:
			object.__setattr__(self, "input_path", Path(self.input_path))
		if self.output_dir is not None:
			object.__setattr__(self, "output_dir", Path(self.output_dir))
		if (self.dump_distances or self.plot) and self.output_dir is None:
			raise ConfigError("distance dumps and plots need an output directory", stage="pipeline")


__all__ = ["RerankConfig", "ScheduleConfig", "SynthConfig", "PipelineConfig"]
