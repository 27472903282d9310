"""CMC-curve and curriculum-schedule figures (PNG, Agg backend)."""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .core.config import ScheduleConfig  # noqa: E402
from .core.constants import ScheduleDefaults  # noqa: E402
from .core.curriculum import alpha  # noqa: E402
from .core.log import get_logger  # noqa: E402
from .core.models import EvalReport  # noqa: E402
from .theme import FONT_FAMILY, FONT_LABEL, FONT_LEGEND, FONT_TITLE, Palette, palette, mode_color  # noqa: E402

logger = get_logger(__name__)

PathLike = Union[str, Path]
MAX_CMC_RANK = 20


def _style(ax, theme: Palette, title: str, xlabel: str, ylabel: str) -> None:
    ax.set_facecolor(theme.bg)
    ax.grid(True, color=theme.grid)
    ax.set_title(title, fontsize=FONT_TITLE, color=theme.text, family=FONT_FAMILY)
    ax.set_xlabel(xlabel, fontsize=FONT_LABEL, color=theme.text)
    ax.set_ylabel(ylabel, fontsize=FONT_LABEL, color=theme.text)
    ax.tick_params(colors=theme.text)


def _save(fig, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, bbox_inches="tight", facecolor=fig.get_facecolor())
    plt.close(fig)
    logger.info("wrote %s", path)
    return path


def plot_cmc(reports: Iterable[EvalReport], path: PathLike, mode: str = "light") -> Path:
    """CMC curves up to rank 20, one line per report."""
    theme = palette(mode)
    fig, ax = plt.subplots(figsize=(6, 4.5), facecolor=theme.bg)
    dashes = {0: "-", 1: "--"}
    for i, report in enumerate(reports):
        depth = min(MAX_CMC_RANK, len(report.cmc))
        ranks = np.arange(1, depth + 1)
        ax.plot(
            ranks,
            100.0 * report.cmc[:depth],
            color=mode_color(report.mode, theme),
            linestyle=dashes[i % 2],
            marker="o",
            markersize=3,
            label=f"{report.mode} / {report.direction.label} (mAP {100.0 * report.mAP:.2f})",
        )
    _style(ax, theme, "Cumulative matching characteristic", "Rank", "Matching rate (%)")
    ax.set_ylim(0, 100)
    ax.legend(fontsize=FONT_LEGEND, loc="lower right")
    return _save(fig, path)


def plot_schedule(
    configs: Sequence[ScheduleConfig],
    path: PathLike,
    samples: int = ScheduleDefaults.EPOCHS + 1,
    mode: str = "light",
) -> Path:
    """Auxiliary factor over the normalised epoch index, one line per schedule."""
    theme = palette(mode)
    fig, ax = plt.subplots(figsize=(6, 4), facecolor=theme.bg)
    grid = np.linspace(0.0, 1.0, samples)
    colors = theme.series()
    for i, config in enumerate(configs):
        ax.plot(grid, [alpha(config, float(e)) for e in grid], color=colors[i % len(colors)], label=config.label)
    _style(ax, theme, "Curriculum auxiliary factor", "Normalised epoch index", "alpha")
    ax.set_xlim(0.0, 1.0)
    ax.legend(fontsize=FONT_LEGEND)
    return _save(fig, path)


__all__ = ["plot_cmc", "plot_schedule"]
