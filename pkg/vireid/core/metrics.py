"""CMC / mAP scoring of a query x gallery distance matrix."""
from __future__ import annotations

import json
import math
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .config import RerankConfig
from .constants import FormatConstants
from .errors import EmptyEvaluationError, InvalidInputError
from .log import get_logger
from .models import DistanceMatrix, EvalReport, EvalSplit

logger = get_logger(__name__)


def average_precision(hits: np.ndarray) -> float:
	"""Mean of precision at each positive position of a ranked hit vector."""
	positions = np.flatnonzero(hits) + 1
	if positions.size == 0:
		return float("nan")
	return float(np.mean(np.arange(1, positions.size + 1) / positions))


def evaluate(
	dist: DistanceMatrix,
	split: EvalSplit,
	exclude_same_camera: bool = False,
	mode: str = "none",
	config: Optional[RerankConfig] = None,
) -> EvalReport:
	"""Rank the gallery for every query and score the ranking.

	Ties in distance keep gallery order. With ``exclude_same_camera`` gallery
	entries sharing both identity and camera with the query are dropped before
	scoring. Queries with no remaining positive are skipped and counted.
	"""
	num_q, num_g = split.num_queries, split.num_gallery
	if dist.shape != (num_q, num_g):
		raise InvalidInputError(
			f"distance matrix {dist.shape} does not match split ({num_q} queries, {num_g} gallery)",
			stage="evaluate",
		)
	labels = split.labels()
	q_pids, g_pids = labels["q_pids"], labels["g_pids"]
	q_camids, g_camids = labels["q_camids"], labels["g_camids"]

	order = np.argsort(dist.values, axis=1, kind="stable")
	matches = g_pids[order] == q_pids[:, None]

	cmc_sum = np.zeros(num_g, dtype=np.float64)
	per_query_ap = np.full(num_q, np.nan)
	valid = 0
	for i in range(num_q):
		hits = matches[i]
		if exclude_same_camera:
			ranked = order[i]
			junk = (g_pids[ranked] == q_pids[i]) & (g_camids[ranked] == q_camids[i])
			hits = hits[~junk]
		if not hits.any():
			continue
		first = int(np.argmax(hits))
		cmc_sum[first:] += 1.0
		per_query_ap[i] = average_precision(hits)
		valid += 1

	skipped = num_q - valid
	if valid == 0:
		raise EmptyEvaluationError("no query has a valid positive in the gallery")
	if skipped:
		logger.warning("%d of %d queries have no valid positive and were skipped", skipped, num_q)
	if num_g < max(FormatConstants.REPORT_RANKS):
		logger.warning("gallery of %d entries is shorter than rank %d; deeper ranks saturate",
					   num_g, max(FormatConstants.REPORT_RANKS))
	cmc = cmc_sum / valid
	mean_ap = float(np.nanmean(per_query_ap))
	return EvalReport(
		cmc=cmc,
		mAP=mean_ap,
		per_query_ap=per_query_ap,
		direction=split.direction,
		num_queries=num_q,
		num_skipped=skipped,
		mode=mode,
		config_echo=config,
	)


def _fixed(value: float) -> float:
	return float(f"{value:.{FormatConstants.FLOAT_DECIMALS}f}")


def report_to_dict(report: EvalReport, include_timing: bool = False, include_mode: bool = False) -> Dict[str, Any]:
	"""JSON-ready view with floats fixed to six decimals.

	The payload holds what the ranking determines plus the configuration
	echo. Run labels (``mode``) and timings stay out unless asked for, so
	two runs that produce the same ranking serialise to the same bytes.
	"""
	payload: Dict[str, Any] = {
		"direction": report.direction.value,
		"mAP": _fixed(report.mAP),
		"cmc": [_fixed(v) for v in report.cmc],
		"ranks": {f"rank{n}": _fixed(report.rank(n)) for n in FormatConstants.REPORT_RANKS},
		"per_query_ap": [None if math.isnan(v) else _fixed(v) for v in report.per_query_ap],
		"num_queries": report.num_queries,
		"num_skipped": report.num_skipped,
		"config": report.config_echo.to_dict() if isinstance(report.config_echo, RerankConfig) else None,
	}
	if include_mode:
		payload["mode"] = report.mode
	if include_timing:
		payload["timing_ms"] = {k: _fixed(v) for k, v in report.timing_ms.items()}
	return payload


def reports_to_json(reports: Iterable[EvalReport]) -> str:
	payload = {"reports": [report_to_dict(r) for r in reports]}
	return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def ascii_table(header: Sequence[str], rows: Sequence[Sequence[str]], left_columns: int = 1) -> str:
	"""Boxed ASCII table; the first ``left_columns`` columns are left aligned."""
	widths = [max(len(r[c]) for r in [header, *rows]) for c in range(len(header))]
	rule = "+" + "+".join("-" * (w + 2) for w in widths) + "+"

	def line(cells: Sequence[str]) -> str:
		out = []
		for c, cell in enumerate(cells):
			out.append(cell.ljust(widths[c]) if c < left_columns else cell.rjust(widths[c]))
		return "| " + " | ".join(out) + " |"

	return "\n".join([rule, line(header), rule] + [line(r) for r in rows] + [rule])


def format_table(reports: Iterable[EvalReport], show_mode: bool = True) -> str:
	"""Rank-1/5/10/20 and mAP in percent, one row per report."""
	header = ["Mode", "Direction"] if show_mode else ["Direction"]
	header += [f"Rank{n}" for n in FormatConstants.REPORT_RANKS] + ["mAP"]
	rows: List[List[str]] = []
	for report in reports:
		cells = ([report.mode] if show_mode else []) + [report.direction.label]
		cells += [f"{100.0 * report.rank(n):.2f}" for n in FormatConstants.REPORT_RANKS]
		cells.append(f"{100.0 * report.mAP:.2f}")
		rows.append(cells)
	return ascii_table(header, rows, left_columns=2 if show_mode else 1)


__all__ = ["average_precision", "evaluate", "report_to_dict", "reports_to_json", "ascii_table", "format_table"]
