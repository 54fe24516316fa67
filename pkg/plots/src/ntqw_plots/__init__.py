"""Render ntqw CSV outputs as figures.

Three figure kinds, one console script each:

    ntqw-plot-carpet   snapshots.csv            -> space-time density map
    ntqw-plot-series   series.csv               -> log-log R0/PR panels
    ntqw-plot-heatmap  diagram_r0/pr.csv        -> thresholded heatmaps

The scripts consume only the documented CSV formats, never the simulator
API, and never modify their inputs. Rendering is deterministic given the
input files; color scales are fixed (carpet: log, floor 1e-6, max 1).
"""

import matplotlib

matplotlib.use("Agg")

from .spec import DEFAULT_THRESHOLDS, FigureKind, FigureSpec  # noqa: E402
from .csvio import InputError  # noqa: E402
from .carpet import render_carpet  # noqa: E402
from .series import render_series  # noqa: E402
from .heatmap import render_heatmap  # noqa: E402

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_THRESHOLDS",
    "FigureKind",
    "FigureSpec",
    "InputError",
    "render_carpet",
    "render_series",
    "render_heatmap",
    "__version__",
]
