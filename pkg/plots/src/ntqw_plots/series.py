"""Log-log R0/PR panels from a series CSV, with power-law guide lines."""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csvio import InputError, read_series
from .spec import FigureKind, FigureSpec


def _fit_guide(times, values, t_min, t_max):
    """Least-squares log-log fit inside the window; returns
    (exponent, intercept) or None when the window holds < 2 points."""
    sel = (times >= t_min) & (times <= t_max)
    if np.count_nonzero(sel) < 2:
        return None
    logt = np.log(times[sel])
    logv = np.log(values[sel])
    slope, intercept = np.polyfit(logt, logv, 1)
    return float(slope), float(intercept)


def render_series(spec: FigureSpec) -> str:
    columns = ("r0_mean", "pr_mean")
    times, data = read_series(spec.inputs["series"], columns)

    fig, axes = plt.subplots(1, 2, figsize=(9.0, 4.0))
    panels = dict(zip(columns, axes))
    dropped = 0
    for column, ax in panels.items():
        values = data[column]
        keep = (times > 0) & (values > 0)
        dropped += int(np.count_nonzero(~keep))
        t, v = times[keep], values[keep]
        if t.size == 0:
            raise InputError(
                f"{spec.inputs['series']}: column {column} has no positive "
                "rows to plot on a log scale"
            )
        ax.loglog(t, v, lw=1.0, color="tab:blue")
        if t.size == 1:
            ax.plot(t, v, "o", color="tab:blue")
        ax.set_xlabel(spec.xlabel or "t")
        ax.set_ylabel(column)
        ax.grid(True, which="both", alpha=0.25)

    for column, t_min, t_max in spec.fits:
        if column not in panels:
            raise InputError(
                f"fit column {column!r} not plotted (have: {', '.join(panels)})"
            )
        values = data[column]
        keep = (times > 0) & (values > 0)
        guide = _fit_guide(times[keep], values[keep], t_min, t_max)
        if guide is None:
            continue
        slope, intercept = guide
        ax = panels[column]
        t_line = np.geomspace(t_min, t_max, 32)
        ax.loglog(
            t_line,
            np.exp(intercept) * t_line**slope,
            "--",
            color="tab:red",
            label=f"slope {slope:+.3f}",
        )
        ax.legend(loc="best", fontsize=9)
        print(f"{column}: exponent {slope:+.4f} over [{t_min:g}, {t_max:g}]")

    if dropped:
        print(f"warning: dropped {dropped} nonpositive row(s)", file=sys.stderr)
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    fig.savefig(spec.output)
    plt.close(fig)
    return spec.output


def _parse_fit(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected COLUMN:TMIN:TMAX, got {text!r}"
        )
    column, t_min, t_max = parts
    try:
        return column, float(t_min), float(t_max)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"non-numeric window in {text!r}"
        ) from None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ntqw-plot-series",
        description="Render a series.csv as log-log R0 and PR panels",
    )
    parser.add_argument("series", help="series CSV path")
    parser.add_argument("output", help="image path (format by extension)")
    parser.add_argument(
        "--fit",
        action="append",
        default=[],
        type=_parse_fit,
        metavar="COLUMN:TMIN:TMAX",
        help="draw a fitted guide line over the window (repeatable)",
    )
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)
    spec = FigureSpec(
        kind=FigureKind.SERIES_LOGLOG,
        inputs={"series": args.series},
        output=args.output,
        title=args.title,
        fits=list(args.fit),
    )
    try:
        path = render_series(spec)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
