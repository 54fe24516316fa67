"""Space-time density carpet from a snapshots CSV."""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import LogNorm

from .csvio import InputError, read_snapshots
from .spec import FigureKind, FigureSpec

# Log color floor: trapped peaks sit orders of magnitude above the
# dispersive background, a linear scale would show only the peak.
DENSITY_FLOOR = 1e-6


def render_carpet(spec: FigureSpec) -> str:
    frames = read_snapshots(spec.inputs["snapshots"])
    times = [t for t, _, _ in frames]
    lo = min(int(offs.min()) for _, offs, _ in frames)
    hi = max(int(offs.max()) for _, offs, _ in frames)
    width = hi - lo + 1

    grid = np.full((len(frames), width), DENSITY_FLOOR)
    for row, (_, offs, probs) in enumerate(frames):
        grid[row, offs - lo] = np.clip(probs, DENSITY_FLOOR, 1.0)

    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    mesh = ax.pcolormesh(
        np.arange(lo, hi + 2) - 0.5,
        np.arange(len(frames) + 1) - 0.5,
        grid,
        norm=LogNorm(vmin=DENSITY_FLOOR, vmax=1.0),
        cmap="inferno",
        rasterized=True,
    )
    ax.set_yticks(np.arange(len(frames)))
    ax.set_yticklabels([str(t) for t in times])
    if len(frames) > 12:
        keep = np.linspace(0, len(frames) - 1, 9).astype(int)
        ax.set_yticks(keep)
        ax.set_yticklabels([str(times[k]) for k in keep])
    ax.set_xlabel(spec.xlabel or "site offset from origin")
    ax.set_ylabel(spec.ylabel or "time step")
    if spec.title:
        ax.set_title(spec.title)
    fig.colorbar(mesh, ax=ax, label="probability")
    fig.tight_layout()
    fig.savefig(spec.output)
    plt.close(fig)
    return spec.output


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ntqw-plot-carpet",
        description="Render a snapshots.csv as a space-time density map",
    )
    parser.add_argument("snapshots", help="snapshots CSV path")
    parser.add_argument("output", help="image path (format by extension)")
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)
    spec = FigureSpec(
        kind=FigureKind.DENSITY_CARPET,
        inputs={"snapshots": args.snapshots},
        output=args.output,
        title=args.title,
    )
    try:
        path = render_carpet(spec)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
