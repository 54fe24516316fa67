"""Readers for the simulator's CSV formats, with loud diagnostics.

Every reader raises InputError naming the file (and usually the line or
column) on malformed input; the console scripts turn that into a
nonzero exit.
"""

from __future__ import annotations

import csv

import numpy as np


class InputError(Exception):
    pass


def _open_rows(path):
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return fh


def _require_columns(path, fieldnames, wanted):
    if fieldnames is None:
        raise InputError(f"{path}: empty file (no header row)")
    missing = [c for c in wanted if c not in fieldnames]
    if missing:
        raise InputError(
            f"{path}: missing column(s) {', '.join(missing)} "
            f"(have: {', '.join(fieldnames)})"
        )


def read_series(path, columns=("r0_mean", "pr_mean")):
    """series.csv -> (times, {column: values}). Requires 't' plus the
    requested columns."""
    with _open_rows(path) as fh:
        reader = csv.DictReader(fh)
        _require_columns(path, reader.fieldnames, ("t",) + tuple(columns))
        times = []
        data = {c: [] for c in columns}
        for line_no, row in enumerate(reader, start=2):
            try:
                times.append(float(row["t"]))
                for c in columns:
                    data[c].append(float(row[c]))
            except (TypeError, ValueError):
                raise InputError(f"{path}:{line_no}: non-numeric value") from None
    if not times:
        raise InputError(f"{path}: no data rows")
    return np.asarray(times), {c: np.asarray(v) for c, v in data.items()}


def read_snapshots(path):
    """snapshots.csv -> sorted list of (t, offsets, probabilities)."""
    with _open_rows(path) as fh:
        reader = csv.DictReader(fh)
        _require_columns(path, reader.fieldnames, ("t", "n_offset", "probability"))
        frames: dict[int, list[tuple[int, float]]] = {}
        for line_no, row in enumerate(reader, start=2):
            try:
                t = int(row["t"])
                n = int(row["n_offset"])
                p = float(row["probability"])
            except (TypeError, ValueError):
                raise InputError(f"{path}:{line_no}: non-numeric value") from None
            frames.setdefault(t, []).append((n, p))
    if not frames:
        raise InputError(f"{path}: no snapshot rows")
    out = []
    for t in sorted(frames):
        pairs = sorted(frames[t])
        offsets = np.array([n for n, _ in pairs], dtype=np.int64)
        probs = np.array([p for _, p in pairs], dtype=np.float64)
        if len(np.unique(offsets)) != len(offsets):
            raise InputError(f"{path}: duplicate site at t={t}")
        out.append((t, offsets, probs))
    return out


def read_matrix(path):
    """diagram_*.csv -> (chi_axis, theta_axis, matrix[i_chi, i_theta])."""
    with _open_rows(path) as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InputError(f"{path}: empty file")
    header = rows[0]
    if len(header) < 2:
        raise InputError(f"{path}: header must carry at least one theta0 value")
    try:
        theta_axis = np.array([float(v) for v in header[1:]])
    except ValueError:
        raise InputError(f"{path}: non-numeric theta0 in header") from None
    chi_vals = []
    body = []
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InputError(
                f"{path}:{line_no}: expected {len(header)} cells, got {len(row)}"
            )
        try:
            chi_vals.append(float(row[0]))
            body.append([float(v) for v in row[1:]])
        except ValueError:
            raise InputError(f"{path}:{line_no}: non-numeric value") from None
    if not body:
        raise InputError(f"{path}: no data rows")
    return np.array(chi_vals), theta_axis, np.array(body)


def read_cells(path):
    """cells.csv -> dict keyed (chi, theta0) with value/mask fields."""
    with _open_rows(path) as fh:
        reader = csv.DictReader(fh)
        _require_columns(
            path,
            reader.fieldnames,
            ("chi", "theta0", "r0_bar", "pr_bar", "mask_r0", "mask_pr"),
        )
        cells = {}
        for line_no, row in enumerate(reader, start=2):
            try:
                key = (float(row["chi"]), float(row["theta0"]))
                cells[key] = {
                    "r0_bar": float(row["r0_bar"]),
                    "pr_bar": float(row["pr_bar"]),
                    "mask_r0": bool(int(row["mask_r0"])),
                    "mask_pr": bool(int(row["mask_pr"])),
                }
            except (TypeError, ValueError):
                raise InputError(f"{path}:{line_no}: malformed cell row") from None
    if not cells:
        raise InputError(f"{path}: no cell rows")
    return cells
