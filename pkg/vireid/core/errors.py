"""Exception hierarchy.

Every error carries the pipeline stage it was raised in and the process exit
code the CLI maps it to. ``str(err)`` renders ``[stage] message``.
"""
from __future__ import annotations

from .constants import ExitCodes


class VireidError(Exception):
	exit_code = ExitCodes.INTERNAL_ERROR
	default_stage = "internal"

	def __init__(self, message: str, stage: str | None = None):
		super().__init__(message)
		self.message = message
		self.stage = stage or self.default_stage

	def __str__(self) -> str:
		return f"[{self.stage}] {self.message}"


class ConfigError(VireidError, ValueError):
	exit_code = ExitCodes.CONFIG_ERROR
	default_stage = "config"


class DataError(VireidError, ValueError):
	exit_code = ExitCodes.DATA_ERROR
	default_stage = "data"


class InvalidInputError(DataError):
	pass


class ManifestError(DataError):
	default_stage = "load"


class MissingBlobError(DataError):
	default_stage = "load"


class DimensionMismatchError(DataError):
	default_stage = "load"


class NonFiniteFeatureError(DataError):
	default_stage = "load"


class ModalityDirectionError(DataError):
	default_stage = "load"


class ChecksumMismatchError(DataError):
	default_stage = "load"


class EmptyEvaluationError(DataError):
	default_stage = "evaluate"


__all__ = [
	"VireidError",
	"ConfigError",
	"DataError",
	"InvalidInputError",
	"ManifestError",
	"MissingBlobError",
	"DimensionMismatchError",
	"NonFiniteFeatureError",
	"ModalityDirectionError",
	"ChecksumMismatchError",
	"EmptyEvaluationError",
]
