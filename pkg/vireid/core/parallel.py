"""Bounded thread-pool helpers.

Results are always returned in input order, so any reduction over them is
independent of the thread count.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from .constants import THREADS_ENV_VAR
from .errors import ConfigError

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: Optional[int] = None) -> int:
	"""Explicit value, else ``VIREID_THREADS``, else 1."""
	if threads is None:
		raw = os.environ.get(THREADS_ENV_VAR)
		if raw is None or raw.strip() == "":
			return 1
		try:
			threads = int(raw)
		except ValueError:
			raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from None
	if threads < 1:
		raise ConfigError(f"thread count must be >= 1, got {threads}")
	return threads


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
	items = list(items)
	if threads <= 1 or len(items) <= 1:
		return [fn(item) for item in items]
	with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
		return list(pool.map(fn, items))


def chunk_ranges(total: int, chunks: int) -> List[range]:
	"""Split ``range(total)`` into at most ``chunks`` contiguous pieces."""
	chunks = max(1, min(chunks, total))
	base, extra = divmod(total, chunks)
	ranges: List[range] = []
	start = 0
	for i in range(chunks):
		stop = start + base + (1 if i < extra else 0)
		ranges.append(range(start, stop))
		start = stop
	return ranges


__all__ = ["resolve_threads", "ordered_map", "chunk_ranges"]
