"""Core enums."""
from enum import Enum


class Modality(Enum):
	RGB = "RGB"
	IR = "IR"


class Role(Enum):
	QUERY = "query"
	GALLERY = "gallery"


class RetrievalDirection(Enum):
	VISIBLE_TO_INFRARED = "visible_to_infrared"
	INFRARED_TO_VISIBLE = "infrared_to_visible"

	@property
	def query_modality(self) -> Modality:
		return Modality.RGB if self is RetrievalDirection.VISIBLE_TO_INFRARED else Modality.IR

	@property
	def gallery_modality(self) -> Modality:
		return Modality.IR if self is RetrievalDirection.VISIBLE_TO_INFRARED else Modality.RGB

	@property
	def opposite(self) -> "RetrievalDirection":
		if self is RetrievalDirection.VISIBLE_TO_INFRARED:
			return RetrievalDirection.INFRARED_TO_VISIBLE
		return RetrievalDirection.VISIBLE_TO_INFRARED

	@property
	def label(self) -> str:
		return "Visible to Infrared" if self is RetrievalDirection.VISIBLE_TO_INFRARED else "Infrared to Visible"


class RerankMode(Enum):
	NONE = "none"
	KRECIPROCAL = "kreciprocal"
	TEMPORAL = "temporal"


class ScheduleStrategy(Enum):
	FIXED = "fixed"
	EXPONENTIAL = "exponential"
	COSINE = "cosine"


__all__ = ["Modality", "Role", "RetrievalDirection", "RerankMode", "ScheduleStrategy"]
