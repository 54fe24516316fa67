from __future__ import annotations

import enum
from dataclasses import dataclass, field

# Same mask thresholds the sweep CSVs are produced with.
DEFAULT_THRESHOLDS = (0.03, 2.0)


class FigureKind(enum.Enum):
    DENSITY_CARPET = "carpet"
    SERIES_LOGLOG = "series"
    PHASE_HEATMAP = "heatmap"


@dataclass
class FigureSpec:
    """Everything a renderer needs: kind, input CSVs, labels, output.

    inputs maps role names to paths; each renderer documents the roles
    it reads ("snapshots", "series", "r0", "pr", "cells"). thresholds
    only matter for heatmaps. fits is a list of (column, t_min, t_max)
    guide-line requests for series figures.
    """

    kind: FigureKind
    inputs: dict[str, str]
    output: str
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    thresholds: tuple[float, float] = DEFAULT_THRESHOLDS
    fits: list[tuple[str, float, float]] = field(default_factory=list)

    def __post_init__(self):
        if not self.output:
            raise ValueError("output path must be nonempty")
        if self.thresholds[0] <= 0 or self.thresholds[1] <= 0:
            raise ValueError(f"thresholds must be > 0, got {self.thresholds}")
