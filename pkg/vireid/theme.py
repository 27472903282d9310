"""Theme & style tokens for report plots.
Provides light/dark palettes and font definitions.
"""
from dataclasses import dataclass
from typing import Tuple

from .core.enums import RerankMode


@dataclass(frozen=True)
class Palette:
    primary: str
    bg: str
    grid: str
    text: str
    raw: str
    kreciprocal: str
    temporal: str
    neutral: str

    def series(self) -> Tuple[str, ...]:
        return (self.primary, self.temporal, self.kreciprocal, self.raw, self.neutral)


LIGHT = Palette(
    primary="#0074D9",
    bg="#ffffff",
    grid="#e9ecef",
    text="#222",
    raw="#888",
    kreciprocal="#FFA500",
    temporal="#228B22",
    neutral="#B22222",
)

DARK = Palette(
    primary="#198cff",
    bg="#1e1f26",
    grid="#2a2c34",
    text="#eee",
    raw="#777",
    kreciprocal="#ffb347",
    temporal="#44d060",
    neutral="#ff6b5c",
)

FONT_FAMILY = "DejaVu Sans"
FONT_TITLE = 13
FONT_LABEL = 11
FONT_LEGEND = 9


def palette(mode: str = "light") -> Palette:
    return DARK if mode.lower() == "dark" else LIGHT


def mode_color(mode: str, theme: Palette = LIGHT) -> str:
    return {
        RerankMode.NONE.value: theme.raw,
        RerankMode.KRECIPROCAL.value: theme.kreciprocal,
        RerankMode.TEMPORAL.value: theme.temporal,
    }.get(mode, theme.primary)
