"""Seeded synthetic benchmark for re-ranking.

``directional_check`` scores raw, k-reciprocal and temporal re-ranking on a
series of seeds; ``parameter_sweep`` varies one re-ranking or generator
parameter and averages mAP over seeds.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from .config import RerankConfig, SynthConfig
from .enums import RerankMode
from .errors import ConfigError
from .log import get_logger
from .metrics import evaluate
from .pipeline import rerank_variants
from .synth import generate

logger = get_logger(__name__)

RERANK_PARAMS = ("k1", "k2", "lambda1", "lambda2", "num_groups")
SYNTH_PARAMS = ("frame_noise", "modality_offset_scale", "camera_offset_scale", "identity_spread")
_INTEGER_PARAMS = ("k1", "k2", "num_groups")


@dataclass(frozen=True)
class SeedOutcome:
	seed: int
	raw_map: float
	kreciprocal_map: float
	temporal_map: float

	@property
	def ordered(self) -> bool:
		"""temporal >= k-reciprocal >= raw."""
		return self.temporal_map >= self.kreciprocal_map >= self.raw_map


@dataclass(frozen=True)
class DirectionalSummary:
	outcomes: Tuple[SeedOutcome, ...]

	@property
	def num_ordered(self) -> int:
		return sum(1 for o in self.outcomes if o.ordered)

	@property
	def mean_gain(self) -> float:
		"""Mean mAP improvement of temporal re-ranking over the raw ranking."""
		return float(np.mean([o.temporal_map - o.raw_map for o in self.outcomes]))

	def passed(self, min_ordered: int) -> bool:
		return self.num_ordered >= min_ordered and self.mean_gain > 0


@dataclass(frozen=True)
class SweepPoint:
	param: str
	value: float
	mean_map: float
	mean_rank1: float
	per_seed_map: Tuple[float, ...]


class RerankBenchmark:
	"""Runs re-ranking variants over generated splits."""

	def __init__(
		self,
		synth: Optional[SynthConfig] = None,
		rerank: Optional[RerankConfig] = None,
		threads: int = 1,
		exclude_same_camera: bool = False,
		progress: bool = False,
	):
		self.synth = synth or SynthConfig()
		self.rerank = rerank or RerankConfig()
		self.threads = threads
		self.exclude_same_camera = exclude_same_camera
		self.progress = progress

	def _score(self, split, dist, mode: RerankMode):
		return evaluate(dist, split, self.exclude_same_camera, mode=mode.value)

	def directional_check(self, seeds: Iterable[int] = range(1, 11)) -> DirectionalSummary:
		outcomes: List[SeedOutcome] = []
		for seed in tqdm(list(seeds), desc="Directional check", disable=not self.progress):
			split = generate(self.synth.replace(seed=seed))
			variants = rerank_variants(split, self.rerank, threads=self.threads)
			maps = {mode: self._score(split, dist, mode).mAP for mode, dist in variants.items()}
			outcome = SeedOutcome(seed, maps[RerankMode.NONE], maps[RerankMode.KRECIPROCAL],
								  maps[RerankMode.TEMPORAL])
			logger.info("seed %d: raw=%.4f kr=%.4f temporal=%.4f", seed, outcome.raw_map,
						outcome.kreciprocal_map, outcome.temporal_map)
			outcomes.append(outcome)
		summary = DirectionalSummary(tuple(outcomes))
		logger.info("%d of %d seeds ordered, mean gain %.4f", summary.num_ordered,
					len(outcomes), summary.mean_gain)
		return summary

	def _configs(self, param: str, value: float) -> Tuple[SynthConfig, RerankConfig]:
		if param in _INTEGER_PARAMS:
			if float(value) != int(value):
				raise ConfigError(f"{param} takes integer values, got {value}", stage="pipeline")
			value = int(value)
		if param in RERANK_PARAMS:
			return self.synth, self.rerank.replace(**{param: value})
		if param in SYNTH_PARAMS:
			return self.synth.replace(**{param: value}), self.rerank
		raise ConfigError(
			f"cannot sweep {param!r}; choose from {sorted(RERANK_PARAMS + SYNTH_PARAMS)}", stage="pipeline"
		)

	def parameter_sweep(
		self,
		param: str,
		values: Sequence[float],
		seeds: Iterable[int] = range(1, 4),
		mode: RerankMode = RerankMode.TEMPORAL,
	) -> List[SweepPoint]:
		mode = RerankMode(mode)
		seeds = list(seeds)
		grid = [(value, *self._configs(param, value)) for value in values]
		points: List[SweepPoint] = []
		for value, synth, rerank in tqdm(grid, desc=f"Sweep {param}", disable=not self.progress):
			maps, rank1 = [], []
			for seed in seeds:
				split = generate(synth.replace(seed=seed))
				dist = rerank_variants(split, rerank, threads=self.threads, modes=(mode,))[mode]
				report = self._score(split, dist, mode)
				maps.append(report.mAP)
				rank1.append(report.rank(1))
			point = SweepPoint(param, value, float(np.mean(maps)), float(np.mean(rank1)), tuple(maps))
			logger.info("%s=%g: mAP=%.4f rank1=%.4f", param, value, point.mean_map, point.mean_rank1)
			points.append(point)
		return points


__all__ = ["SeedOutcome", "DirectionalSummary", "SweepPoint", "RerankBenchmark", "RERANK_PARAMS", "SYNTH_PARAMS"]
