"""Curriculum weighting between a primary and an auxiliary loss.

	L_total = (1 - alpha) * L_primary + alpha * L_auxiliary

with alpha driven by the normalised epoch index E in [0, 1]:

	fixed        alpha(E) = a
	exponential  alpha(E) = exp(-tau * E) / 2
	cosine       alpha(E) = (cos(pi * E) + phi) / (2 * (1 + phi))
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

from .config import ScheduleConfig
from .enums import ScheduleStrategy
from .errors import ConfigError, InvalidInputError


@dataclass(frozen=True)
class LossPair:
	primary_loss: float
	auxiliary_loss: float

	def __post_init__(self):
		for name in ("primary_loss", "auxiliary_loss"):
			value = getattr(self, name)
			if not math.isfinite(value) or value < 0:
				raise InvalidInputError(f"{name} must be finite and >= 0, got {value}", stage="schedule")


def alpha(config: ScheduleConfig, epoch_fraction: float) -> float:
	if not 0.0 <= epoch_fraction <= 1.0:
		raise InvalidInputError(f"normalised epoch index must lie in [0, 1], got {epoch_fraction}",
								stage="schedule")
	if config.strategy is ScheduleStrategy.FIXED:
		return float(config.value)
	if config.strategy is ScheduleStrategy.EXPONENTIAL:
		return 0.5 * math.exp(-config.value * epoch_fraction)
	phi = config.value
	return (math.cos(math.pi * epoch_fraction) + phi) / (2.0 * (1.0 + phi))


def combine(losses: LossPair, alpha_value: float) -> float:
	if not 0.0 <= alpha_value <= 1.0:
		raise ConfigError(f"alpha must lie in [0, 1], got {alpha_value}", stage="schedule")
	return (1.0 - alpha_value) * losses.primary_loss + alpha_value * losses.auxiliary_loss


def normalized_epoch(completed_epochs: float, total_epochs: int) -> float:
	"""``completed / total`` clamped to [0, 1]; fractional epochs allowed."""
	if total_epochs < 1:
		raise ConfigError(f"total_epochs must be >= 1, got {total_epochs}", stage="schedule")
	return min(1.0, max(0.0, completed_epochs / total_epochs))


def schedule_table(config: ScheduleConfig, total_epochs: int) -> List[Tuple[int, float, float]]:
	"""``(epoch, E, alpha)`` for epochs ``0..total_epochs``."""
	rows = []
	for epoch in range(total_epochs + 1):
		e = normalized_epoch(epoch, total_epochs)
		rows.append((epoch, e, alpha(config, e)))
	return rows


class CurriculumScheduler:
	"""Per-epoch curriculum factor for an external training loop.

	Call ``step()`` once at the end of every epoch; ``alpha`` reflects the
	number of completed epochs. Per-iteration updates are possible through
	``step(fraction)`` with a fractional epoch count.
	"""

	def __init__(self, config: ScheduleConfig, total_epochs: int, completed_epochs: float = 0.0):
		normalized_epoch(completed_epochs, total_epochs)
		self.config = config
		self.total_epochs = total_epochs
		self.completed_epochs = completed_epochs

	@property
	def epoch_fraction(self) -> float:
		return normalized_epoch(self.completed_epochs, self.total_epochs)

	@property
	def alpha(self) -> float:
		return alpha(self.config, self.epoch_fraction)

	def step(self, epochs: float = 1.0) -> float:
		self.completed_epochs += epochs
		return self.alpha

	def combine(self, primary_loss: float, auxiliary_loss: float) -> float:
		return combine(LossPair(primary_loss, auxiliary_loss), self.alpha)

	def __repr__(self):
		return f"CurriculumScheduler({self.config.label}, epoch={self.completed_epochs}/{self.total_epochs})"


__all__ = ["LossPair", "alpha", "combine", "normalized_epoch", "schedule_table", "CurriculumScheduler"]
