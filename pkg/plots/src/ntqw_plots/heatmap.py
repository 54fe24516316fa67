"""Thresholded phase-diagram heatmaps from diagram matrix CSVs."""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import LogNorm

from .csvio import InputError, read_cells, read_matrix
from .spec import DEFAULT_THRESHOLDS, FigureKind, FigureSpec


def _check_masks_against_cells(cells_path, chi_axis, theta_axis, matrix,
                               threshold, mask_key):
    """The mask implied by (matrix, threshold) must equal the mask the
    sweep wrote into cells.csv; refuses to render an inconsistent pair."""
    cells = read_cells(cells_path)
    for i, chi in enumerate(chi_axis):
        for j, theta0 in enumerate(theta_axis):
            key = (chi, theta0)
            if key not in cells:
                raise InputError(
                    f"{cells_path}: no cell for chi={chi!r}, theta0={theta0!r}"
                )
            expected = matrix[i, j] < threshold
            if cells[key][mask_key] != expected:
                raise InputError(
                    f"{cells_path}: {mask_key} disagrees with the matrix at "
                    f"chi={chi!r}, theta0={theta0!r} (cell says "
                    f"{cells[key][mask_key]}, matrix value {matrix[i, j]!r} "
                    f"vs threshold {threshold!r})"
                )


def _edges(axis):
    axis = np.asarray(axis, dtype=float)
    if axis.size == 1:
        half = 0.5 if axis[0] == 0 else abs(axis[0]) * 0.05 + 0.5
        return np.array([axis[0] - half, axis[0] + half])
    mids = (axis[1:] + axis[:-1]) / 2
    first = axis[0] - (mids[0] - axis[0])
    last = axis[-1] + (axis[-1] - mids[-1])
    return np.concatenate([[first], mids, [last]])


def render_heatmap(spec: FigureSpec) -> str:
    r0_thr, pr_thr = spec.thresholds
    panels = []
    for role, threshold, mask_key in (
        ("r0", r0_thr, "mask_r0"),
        ("pr", pr_thr, "mask_pr"),
    ):
        if role not in spec.inputs:
            continue
        chi_axis, theta_axis, matrix = read_matrix(spec.inputs[role])
        if matrix.shape != (chi_axis.size, theta_axis.size):
            raise InputError(
                f"{spec.inputs[role]}: matrix shape {matrix.shape} does not "
                f"match axes ({chi_axis.size}, {theta_axis.size})"
            )
        if "cells" in spec.inputs:
            _check_masks_against_cells(
                spec.inputs["cells"], chi_axis, theta_axis, matrix,
                threshold, mask_key,
            )
        panels.append((role, threshold, chi_axis, theta_axis, matrix))
    if not panels:
        raise InputError("no matrix inputs given (need 'r0' and/or 'pr')")

    fig, axes = plt.subplots(
        1, len(panels), figsize=(5.2 * len(panels), 4.2), squeeze=False
    )
    for ax, (role, threshold, chi_axis, theta_axis, matrix) in zip(
        axes[0], panels
    ):
        # chi horizontal, theta0 vertical: transpose the [i_chi, i_theta]
        # matrix and mask sub-threshold cells so they render black
        if role == "r0":
            shown = np.clip(matrix, 0.0, 1.0)
            norm = None
            vmin, vmax = 0.0, 1.0
            label = "tail-averaged R0"
        else:
            shown = np.clip(matrix, 1.0, None)
            norm = LogNorm(vmin=1.0, vmax=max(2.0, float(shown.max())))
            vmin = vmax = None
            label = "tail-averaged PR (log scale)"
        masked = np.ma.masked_where(matrix < threshold, shown)
        cmap = plt.get_cmap("viridis").copy()
        cmap.set_bad("black")
        mesh = ax.pcolormesh(
            _edges(chi_axis),
            _edges(theta_axis),
            masked.T,
            cmap=cmap,
            norm=norm,
            vmin=vmin,
            vmax=vmax,
        )
        ax.set_xlabel(spec.xlabel or "chi")
        ax.set_ylabel(spec.ylabel or "theta0")
        ax.set_title(f"{label}; below {threshold:g} in black")
        fig.colorbar(mesh, ax=ax)
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    fig.savefig(spec.output)
    plt.close(fig)
    return spec.output


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ntqw-plot-heatmap",
        description="Render diagram_r0/diagram_pr CSV matrices as "
        "thresholded heatmaps",
    )
    parser.add_argument("--r0", help="diagram_r0.csv path")
    parser.add_argument("--pr", help="diagram_pr.csv path")
    parser.add_argument(
        "--cells",
        help="cells.csv path; when given, its mask columns are checked "
        "against the matrices before rendering",
    )
    parser.add_argument("output", help="image path (format by extension)")
    parser.add_argument(
        "--r0-threshold", type=float, default=DEFAULT_THRESHOLDS[0]
    )
    parser.add_argument(
        "--pr-threshold", type=float, default=DEFAULT_THRESHOLDS[1]
    )
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)
    if not args.r0 and not args.pr:
        parser.error("need --r0 and/or --pr")
    inputs = {}
    if args.r0:
        inputs["r0"] = args.r0
    if args.pr:
        inputs["pr"] = args.pr
    if args.cells:
        inputs["cells"] = args.cells
    try:
        spec = FigureSpec(
            kind=FigureKind.PHASE_HEATMAP,
            inputs=inputs,
            output=args.output,
            title=args.title,
            thresholds=(args.r0_threshold, args.pr_threshold),
        )
        path = render_heatmap(spec)
    except (InputError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
