"""Stage integration: distances -> optional re-ranking -> evaluation."""
from __future__ import annotations

import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .config import PipelineConfig, RerankConfig
from .distance import feature_distances
from .enums import RerankMode
from .errors import ConfigError, VireidError
from .kreciprocal import fuse, instance_jaccard
from .log import get_logger
from .metrics import evaluate, format_table, report_to_dict, reports_to_json
from .models import DistanceMatrix, EvalReport, EvalSplit
from .storage import dump_matrix, load_split, write_json
from .synth import generate
from .temporal import cross_temporal

logger = get_logger(__name__)


def _tag(exc: VireidError, stage: str) -> VireidError:
	if exc.stage == exc.default_stage:
		exc.stage = stage
	return exc


def rerank_variants(split: EvalSplit, config: RerankConfig, threads: int = 1,
					modes=tuple(RerankMode)) -> Dict[RerankMode, DistanceMatrix]:
	"""Distance matrices for several modes, sharing the intermediate terms.

	Each entry is bit-identical to what the single-mode operation returns.
	"""
	variants: Dict[RerankMode, DistanceMatrix] = {}
	base = feature_distances(split)
	if RerankMode.NONE in modes:
		variants[RerankMode.NONE] = base
	if RerankMode.KRECIPROCAL in modes or RerankMode.TEMPORAL in modes:
		fused = fuse(base, instance_jaccard(split, config, threads=threads), config.lambda1)
		if RerankMode.KRECIPROCAL in modes:
			variants[RerankMode.KRECIPROCAL] = fused
		if RerankMode.TEMPORAL in modes:
			cross = cross_temporal(split, config, threads=threads)
			variants[RerankMode.TEMPORAL] = DistanceMatrix(
				fused.values + config.lambda2 * cross.values,
				split.query_ids, split.gallery_ids, kind="rerank",
			)
	return variants


class ReidPipeline:
	"""Scores one split under one re-ranking mode and keeps per-stage timings."""

	def __init__(self, mode: RerankMode = RerankMode.TEMPORAL, rerank: Optional[RerankConfig] = None,
				 exclude_same_camera: bool = False, threads: int = 1):
		self.mode = RerankMode(mode)
		self.rerank = rerank or RerankConfig()
		self.exclude_same_camera = exclude_same_camera
		self.threads = threads
		self.timing_ms: Dict[str, float] = {}

	def _timed(self, stage: str, fn, *args, **kwargs):
		started = time.perf_counter()
		try:
			return fn(*args, **kwargs)
		except VireidError as exc:
			raise _tag(exc, stage)
		finally:
			self.timing_ms[stage] = 1000.0 * (time.perf_counter() - started)

	def distances(self, split: EvalSplit) -> DistanceMatrix:
		base = self._timed("distance", feature_distances, split)
		if self.mode is RerankMode.NONE:
			return base
		jacc = self._timed("rerank", instance_jaccard, split, self.rerank, threads=self.threads)
		fused = fuse(base, jacc, self.rerank.lambda1)
		if self.mode is RerankMode.KRECIPROCAL:
			return fused
		cross = self._timed("temporal", cross_temporal, split, self.rerank, threads=self.threads)
		return DistanceMatrix(fused.values + self.rerank.lambda2 * cross.values,
							  split.query_ids, split.gallery_ids, kind="rerank")

	def process_split(self, split: EvalSplit):
		"""Returns ``(report, distance_matrix)``."""
		self.timing_ms = {}
		started = time.perf_counter()
		dist = self.distances(split)
		config = None if self.mode is RerankMode.NONE else self.rerank
		report = self._timed("evaluate", evaluate, dist, split, self.exclude_same_camera,
							 mode=self.mode.value, config=config)
		self.timing_ms["total"] = 1000.0 * (time.perf_counter() - started)
		report.timing_ms.update(self.timing_ms)
		logger.info("%s %s: mAP=%.4f rank1=%.4f (%.1f ms)", self.mode.value, split.direction.value,
					report.mAP, report.rank(1), self.timing_ms["total"])
		return report, dist


def acquire_split(config: PipelineConfig) -> EvalSplit:
	if config.input_path is not None:
		try:
			return load_split(config.input_path)
		except VireidError as exc:
			raise _tag(exc, "load")
	try:
		return generate(config.synth)
	except VireidError as exc:
		raise _tag(exc, "synth")


def _prepare_output(directory: Path) -> Path:
	try:
		directory.mkdir(parents=True, exist_ok=True)
		marker = directory / ".write-test"
		marker.write_text("", encoding="utf-8")
		marker.unlink()
	except OSError as exc:
		raise ConfigError(f"output directory {directory} is not writable: {exc}", stage="pipeline") from exc
	return directory


def write_reports(reports: Sequence[EvalReport], directory: Path) -> None:
	"""``report.json`` and ``report.txt`` depend only on the rankings and the
	configuration echo; the mode label and stage timings go to ``run.json``.
	"""
	(directory / "report.json").write_text(reports_to_json(reports), encoding="utf-8")
	(directory / "report.txt").write_text(format_table(reports, show_mode=False) + "\n", encoding="utf-8")
	write_json({
		"mode": reports[0].mode if reports else None,
		"timing_ms": {r.direction.value: report_to_dict(r, include_timing=True)["timing_ms"] for r in reports},
	}, directory / "run.json")


def run_eval(config: PipelineConfig) -> List[EvalReport]:
	"""Run the configured pipeline and write reports when an output directory is set.

	Files: ``report.json``, ``report.txt``, ``run.json`` (see ``write_reports``),
	optional ``distances_<direction>.bin/.json`` dumps and ``cmc.png``.
	"""
	output = _prepare_output(config.output_dir) if config.output_dir is not None else None
	split = acquire_split(config)
	splits = [split, split.reversed()] if config.both_directions else [split]
	pipeline = ReidPipeline(config.mode, config.rerank, config.exclude_same_camera, config.threads)
	reports: List[EvalReport] = []
	for current in splits:
		report, dist = pipeline.process_split(current)
		reports.append(report)
		if output is not None and config.dump_distances:
			dump_matrix(dist, output / f"distances_{current.direction.value}")
	if output is not None:
		write_reports(reports, output)
		if config.plot:
			from ..plots import plot_cmc
			plot_cmc(reports, output / "cmc.png")
	return reports


__all__ = ["rerank_variants", "ReidPipeline", "acquire_split", "write_reports", "run_eval"]
