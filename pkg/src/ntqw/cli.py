"""Command-line entry point and file formats.

Commands:

    ntqw evolve --config exp.ini [--jobs N] [--paper-scale] [--set k=v ...]
    ntqw sweep  --config exp.ini [--jobs N] [--resume] [--paper-scale] [--set k=v ...]
    ntqw fit SERIES.csv --column NAME --t-min A --t-max B

Experiment files are INI documents with sections [walk], [disorder],
[ensemble], [sampling], [sweep], [output]; unknown sections or keys are
rejected. Angle values accept plain floats or pi expressions such as
"pi/4" or "3*pi/8".

Output formats (all CSV with a header row, floats via repr so files
round-trip bit-exactly):

    series.csv     t, r0_mean, pr_mean [, r0_<k>, pr_<k> per sample]
    snapshots.csv  t, n_offset, probability   (offset from the origin,
                   rows cover |offset| <= t; absent sites are exactly 0)
    cells.csv      chi, theta0, r0_bar, pr_bar, mask_r0, mask_pr
    diagram_r0.csv / diagram_pr.csv
                   matrix with theta0 values across the header row and
                   chi values down the first column
    meta.json      every parameter, seed, and derived quantity needed
                   to regenerate the data files bit-identically

Exit codes: 0 success, 2 configuration/input error (message names the
offending file, section, or key), 1 runtime failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import os
import re
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .disorder import GENERATOR_NAME, DisorderKind
from .exceptions import ConfigurationError
from .observables import ObservableSeries, fit_power_law, sample_times
from .sweep import (
    DEFAULT_THRESHOLDS,
    PhaseDiagram,
    RunConfig,
    run_ensemble,
    run_phase_diagram,
    sweep_digest,
)

__all__ = [
    "ExperimentFile",
    "load_experiment",
    "parse_angle",
    "cmd_evolve",
    "cmd_sweep",
    "cmd_fit",
    "main",
    "OUTPUT_DIR_ENV",
    "write_series_csv",
    "write_snapshots_csv",
    "write_cells_csv",
    "write_matrix_csv",
]

OUTPUT_DIR_ENV = "NTQW_OUTPUT_DIR"

PAPER_STEPS = 70_000
PAPER_ENSEMBLE = 50

# section -> key -> (parser, default); None default means required
# when the section matters for the command being run.
_PI_EXPR = re.compile(
    r"""^\s*(?P<sign>[+-])?\s*
         (?:(?P<mul>\d+(?:\.\d*)?)\s*\*\s*)?
         pi
         (?:\s*/\s*(?P<div>\d+(?:\.\d*)?))?\s*$""",
    re.VERBOSE | re.IGNORECASE,
)


def parse_angle(text: str) -> float:
    """Angle in radians from a float literal or a pi expression
    ("pi", "pi/3", "3*pi/8", "-pi/2")."""
    m = _PI_EXPR.match(text)
    if m:
        value = np.pi
        if m.group("mul"):
            value *= float(m.group("mul"))
        if m.group("div"):
            divisor = float(m.group("div"))
            if divisor == 0:
                raise ConfigurationError(f"division by zero in angle {text!r}")
            value /= divisor
        if m.group("sign") == "-":
            value = -value
        return float(value)
    try:
        return float(text)
    except ValueError:
        raise ConfigurationError(
            f"cannot parse angle {text!r}; use a float or a pi expression like pi/4"
        ) from None


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"cannot parse boolean {text!r}")


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigurationError(f"cannot parse integer {text!r}") from None


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigurationError(f"cannot parse number {text!r}") from None


_SCHEMA: dict[str, dict[str, tuple]] = {
    "walk": {
        "theta0": (parse_angle, None),
        "chi": (_parse_float, None),
        "steps": (_parse_int, None),
    },
    "disorder": {
        "kind": (DisorderKind.parse, DisorderKind.HOMOGENEOUS),
        "width": (_parse_float, 10.0),
        "seed": (_parse_int, 0),
    },
    "ensemble": {
        "size": (_parse_int, 1),
    },
    "sampling": {
        "num_points": (_parse_int, 400),
        "snapshot_times": (str, ""),
    },
    "sweep": {
        "chi_min": (_parse_float, None),
        "chi_max": (_parse_float, None),
        "chi_count": (_parse_int, None),
        "theta_min": (parse_angle, None),
        "theta_max": (parse_angle, None),
        "theta_count": (_parse_int, None),
    },
    "output": {
        "directory": (str, None),
        "tail_fraction": (_parse_float, 0.1),
        "r0_threshold": (_parse_float, DEFAULT_THRESHOLDS[0]),
        "pr_threshold": (_parse_float, DEFAULT_THRESHOLDS[1]),
        "per_sample": (_parse_bool, False),
    },
}


@dataclass
class ExperimentFile:
    """Parsed and validated experiment description.

    Values not present in the file hold their documented defaults;
    walk.* and sweep.* stay None until required by a command. raw keeps
    the effective string form of every provided setting for metadata.
    """

    theta0: float | None = None
    chi: float | None = None
    steps: int | None = None
    kind: DisorderKind = DisorderKind.HOMOGENEOUS
    width: float = 10.0
    seed: int = 0
    ensemble_size: int = 1
    num_points: int = 400
    snapshot_times_spec: str = ""
    chi_min: float | None = None
    chi_max: float | None = None
    chi_count: int | None = None
    theta_min: float | None = None
    theta_max: float | None = None
    theta_count: int | None = None
    directory: str | None = None
    tail_fraction: float = 0.1
    r0_threshold: float = DEFAULT_THRESHOLDS[0]
    pr_threshold: float = DEFAULT_THRESHOLDS[1]
    per_sample: bool = False
    raw: dict = None

    _FIELD_BY_KEY = {
        ("walk", "theta0"): "theta0",
        ("walk", "chi"): "chi",
        ("walk", "steps"): "steps",
        ("disorder", "kind"): "kind",
        ("disorder", "width"): "width",
        ("disorder", "seed"): "seed",
        ("ensemble", "size"): "ensemble_size",
        ("sampling", "num_points"): "num_points",
        ("sampling", "snapshot_times"): "snapshot_times_spec",
        ("sweep", "chi_min"): "chi_min",
        ("sweep", "chi_max"): "chi_max",
        ("sweep", "chi_count"): "chi_count",
        ("sweep", "theta_min"): "theta_min",
        ("sweep", "theta_max"): "theta_max",
        ("sweep", "theta_count"): "theta_count",
        ("output", "directory"): "directory",
        ("output", "tail_fraction"): "tail_fraction",
        ("output", "r0_threshold"): "r0_threshold",
        ("output", "pr_threshold"): "pr_threshold",
        ("output", "per_sample"): "per_sample",
    }

    def apply(self, section: str, key: str, text: str, where: str):
        if section not in _SCHEMA:
            raise ConfigurationError(
                f"{where}: unknown section [{section}]; "
                f"expected one of {', '.join(sorted(_SCHEMA))}"
            )
        if key not in _SCHEMA[section]:
            raise ConfigurationError(
                f"{where}: unknown key {key!r} in section [{section}]; "
                f"expected one of {', '.join(sorted(_SCHEMA[section]))}"
            )
        parser_fn = _SCHEMA[section][key][0]
        try:
            value = parser_fn(text)
        except ConfigurationError as exc:
            raise ConfigurationError(f"{where}: [{section}] {key}: {exc}") from None
        setattr(self, self._FIELD_BY_KEY[(section, key)], value)
        self.raw[(section, key)] = text

    def validate_common(self, where: str):
        if self.steps is None:
            raise ConfigurationError(f"{where}: missing required key [walk] steps")
        if self.steps < 1:
            raise ConfigurationError(f"{where}: [walk] steps must be >= 1")
        if self.width < 0:
            raise ConfigurationError(f"{where}: [disorder] width must be >= 0")
        if self.ensemble_size < 1:
            raise ConfigurationError(f"{where}: [ensemble] size must be >= 1")
        if self.r0_threshold <= 0 or self.pr_threshold <= 0:
            raise ConfigurationError(f"{where}: [output] thresholds must be > 0")
        if not 0 < self.tail_fraction <= 1:
            raise ConfigurationError(
                f"{where}: [output] tail_fraction must be in (0, 1]"
            )

    def validate_walk(self, where: str):
        self.validate_common(where)
        for name in ("theta0", "chi"):
            if getattr(self, name) is None:
                raise ConfigurationError(
                    f"{where}: missing required key [walk] {name}"
                )
        if self.chi < 0:
            raise ConfigurationError(f"{where}: [walk] chi must be >= 0")

    def validate_sweep(self, where: str):
        self.validate_common(where)
        for name in (
            "chi_min", "chi_max", "chi_count",
            "theta_min", "theta_max", "theta_count",
        ):
            if getattr(self, name) is None:
                raise ConfigurationError(
                    f"{where}: missing required key [sweep] {name}"
                )
        if self.chi_count < 1 or self.theta_count < 1:
            raise ConfigurationError(
                f"{where}: [sweep] chi_count and theta_count must be >= 1"
            )
        if self.chi_min < 0:
            raise ConfigurationError(f"{where}: [sweep] chi_min must be >= 0")
        if self.chi_max < self.chi_min or self.theta_max < self.theta_min:
            raise ConfigurationError(
                f"{where}: [sweep] axis maxima must be >= their minima"
            )

    def snapshot_times(self) -> tuple[int, ...]:
        return _parse_snapshot_times(self.snapshot_times_spec, self.steps)

    def run_config(self) -> RunConfig:
        return RunConfig.create(
            theta0=self.theta0,
            chi=self.chi,
            kind=self.kind,
            steps=self.steps,
            ensemble_size=self.ensemble_size,
            base_seed=self.seed,
            width=self.width,
            num_points=self.num_points,
            snapshot_times=self.snapshot_times(),
            tail_fraction=self.tail_fraction,
        )

    def sweep_axes(self) -> tuple[np.ndarray, np.ndarray]:
        chi_axis = np.linspace(self.chi_min, self.chi_max, self.chi_count)
        theta_axis = np.linspace(self.theta_min, self.theta_max, self.theta_count)
        return chi_axis, theta_axis

    def sweep_template(self) -> RunConfig:
        # placeholder point; each cell substitutes its own (chi, theta0, seed)
        return RunConfig.create(
            theta0=self.theta_min,
            chi=self.chi_min,
            kind=self.kind,
            steps=self.steps,
            ensemble_size=self.ensemble_size,
            base_seed=self.seed,
            width=self.width,
            num_points=self.num_points,
            snapshot_times=(),
            tail_fraction=self.tail_fraction,
        )

    def effective_settings(self) -> dict[str, dict[str, str]]:
        """Effective configuration as section -> key -> string, exactly
        reparseable by load_experiment (used for meta.json)."""
        out: dict[str, dict[str, str]] = {}
        for (section, key), text in sorted(self.raw.items()):
            out.setdefault(section, {})[key] = text
        return out


def _parse_snapshot_times(spec: str, steps: int) -> tuple[int, ...]:
    """Snapshot schedule: '' for none, comma-separated integers, or
    'linear:K' / 'log:K' for K generated times in [0, steps]. Generated
    times are even (site parity makes odd-time frames checkerboards)."""
    spec = spec.strip()
    if not spec:
        return ()
    if spec.startswith(("linear:", "log:")):
        mode, _, count_text = spec.partition(":")
        count = _parse_int(count_text)
        if count < 1:
            raise ConfigurationError(f"snapshot count must be >= 1 in {spec!r}")
        if mode == "linear":
            ts = np.linspace(0, steps, count)
            even = np.unique((np.round(ts / 2.0)).astype(np.int64) * 2)
            even = even[even <= steps]
        else:
            even = sample_times(steps, count, include_zero=True)
        return tuple(int(t) for t in even)
    times = []
    for part in spec.split(","):
        t = _parse_int(part.strip())
        if not 0 <= t <= steps:
            raise ConfigurationError(
                f"snapshot time {t} outside [0, {steps}]"
            )
        times.append(t)
    return tuple(sorted(set(times)))


def load_experiment(path: str, overrides=(), paper_scale: bool = False) -> ExperimentFile:
    """Read an INI experiment file, then apply --paper-scale and --set
    overrides (in that order, so explicit --set wins)."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigurationError(f"{path}: {exc}") from None

    exp = ExperimentFile(raw={})
    for section in parser.sections():
        for key, text in parser.items(section):
            exp.apply(section, key, text, where=path)
    if paper_scale:
        exp.apply("walk", "steps", str(PAPER_STEPS), where="--paper-scale")
        exp.apply("ensemble", "size", str(PAPER_ENSEMBLE), where="--paper-scale")
    for item in overrides:
        if "=" not in item:
            raise ConfigurationError(
                f"--set expects section.key=value, got {item!r}"
            )
        dotted, _, text = item.partition("=")
        if "." not in dotted:
            raise ConfigurationError(
                f"--set expects section.key=value, got {item!r}"
            )
        section, _, key = dotted.partition(".")
        exp.apply(section.strip(), key.strip(), text.strip(), where=f"--set {item}")
    return exp


# ---------------------------------------------------------------- output


def _fmt(x) -> str:
    """Shortest round-trip decimal form; deterministic across runs."""
    return repr(float(x))


def _resolve_outdir(exp: ExperimentFile) -> str:
    out = exp.directory or os.environ.get(OUTPUT_DIR_ENV) or "."
    os.makedirs(out, exist_ok=True)
    return out


def write_series_csv(path, series: ObservableSeries, per_sample=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        header = ["t", "r0_mean", "pr_mean"]
        if per_sample:
            for k in range(len(per_sample)):
                header += [f"r0_{k:03d}", f"pr_{k:03d}"]
        fh.write(",".join(header) + "\n")
        for row_i, t in enumerate(series.times):
            cells = [str(int(t)), _fmt(series.r0[row_i]), _fmt(series.pr[row_i])]
            if per_sample:
                for s in per_sample:
                    cells += [_fmt(s.r0[row_i]), _fmt(s.pr[row_i])]
            fh.write(",".join(cells) + "\n")


def write_snapshots_csv(path, snapshots, n_origin: int):
    """Rows (t, n_offset, probability) covering the causal window
    |offset| <= t for each snapshot; sites outside it are exactly 0."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,n_offset,probability\n")
        for t, density in snapshots:
            lo = max(n_origin - t, 0)
            hi = min(n_origin + t, len(density) - 1)
            for n in range(lo, hi + 1):
                fh.write(f"{t},{n - n_origin},{_fmt(density[n])}\n")


def write_cells_csv(path, diagram: PhaseDiagram):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("chi,theta0,r0_bar,pr_bar,mask_r0,mask_pr\n")
        for i, chi in enumerate(diagram.chi_axis):
            for j, theta0 in enumerate(diagram.theta_axis):
                fh.write(
                    ",".join(
                        [
                            _fmt(chi),
                            _fmt(theta0),
                            _fmt(diagram.r0_bar[i, j]),
                            _fmt(diagram.pr_bar[i, j]),
                            str(int(diagram.mask_r0[i, j])),
                            str(int(diagram.mask_pr[i, j])),
                        ]
                    )
                    + "\n"
                )


def write_matrix_csv(path, chi_axis, theta_axis, matrix):
    """theta0 values across the header, chi values down the first
    column, matrix[i_chi, i_theta] in the body."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("chi\\theta0," + ",".join(_fmt(t) for t in theta_axis) + "\n")
        for i, chi in enumerate(chi_axis):
            fh.write(
                _fmt(chi) + "," + ",".join(_fmt(v) for v in matrix[i]) + "\n"
            )


def _write_meta(path, command: str, exp: ExperimentFile, derived: dict, wall_time: float):
    record = {
        "schema": "ntqw.meta.v1",
        "version": __version__,
        "command": command,
        "generator": GENERATOR_NAME,
        "settings": exp.effective_settings(),
        "derived": derived,
        "wall_time_s": wall_time,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")


def experiment_from_meta(meta: dict) -> ExperimentFile:
    """Rebuild the experiment description from a meta.json record; the
    data files regenerate bit-identically from it."""
    exp = ExperimentFile(raw={})
    for section, keys in meta["settings"].items():
        for key, text in keys.items():
            exp.apply(section, key, text, where="meta.json")
    return exp


# ---------------------------------------------------------------- commands


def cmd_evolve(args) -> int:
    exp = load_experiment(args.config, args.set or (), args.paper_scale)
    exp.validate_walk(args.config)
    config = exp.run_config()
    outdir = _resolve_outdir(exp)
    t0 = time.perf_counter()
    averaged, metas = run_ensemble(
        config, jobs=args.jobs, keep_samples=exp.per_sample
    )
    wall = time.perf_counter() - t0

    per_sample = None
    if exp.per_sample and len(metas) > 1:
        per_sample = [m.pop("series") for m in metas]
    elif exp.per_sample:
        for m in metas:
            m.pop("series", None)

    series_path = os.path.join(outdir, "series.csv")
    snaps_path = os.path.join(outdir, "snapshots.csv")
    meta_path = os.path.join(outdir, "meta.json")
    write_series_csv(series_path, averaged, per_sample)
    write_snapshots_csv(snaps_path, averaged.snapshots or [], config.n_origin)
    derived = {
        "num_sites": config.num_sites,
        "n_origin": config.n_origin,
        "t_max": int(averaged.times[-1]) if len(averaged.times) else 0,
        "recorded_points": int(len(averaged.times)),
        "snapshot_times": list(config.snapshot_times),
        "effective_ensemble": metas[0]["effective_ensemble"] if metas else 0,
        "final_norm_sq": [m["final_norm_sq"] for m in metas],
        "outputs": ["series.csv", "snapshots.csv"],
    }
    _write_meta(meta_path, "evolve", exp, derived, wall)
    print(f"wrote {series_path}, {snaps_path}, {meta_path} ({wall:.1f}s)")
    return 0


def cmd_sweep(args) -> int:
    exp = load_experiment(args.config, args.set or (), args.paper_scale)
    exp.validate_sweep(args.config)
    chi_axis, theta_axis = exp.sweep_axes()
    template = exp.sweep_template()
    thresholds = (exp.r0_threshold, exp.pr_threshold)
    outdir = _resolve_outdir(exp)
    journal_path = os.path.join(outdir, "cells.jsonl")
    if not args.resume and os.path.exists(journal_path):
        os.remove(journal_path)
    if not os.path.exists(journal_path):
        open(journal_path, "w").close()

    t0 = time.perf_counter()
    diagram = run_phase_diagram(
        chi_axis,
        theta_axis,
        template,
        thresholds=thresholds,
        jobs=args.jobs,
        journal_path=journal_path,
        progress=_progress_printer(args) if args.progress else None,
    )
    wall = time.perf_counter() - t0

    cells_path = os.path.join(outdir, "cells.csv")
    r0_path = os.path.join(outdir, "diagram_r0.csv")
    pr_path = os.path.join(outdir, "diagram_pr.csv")
    meta_path = os.path.join(outdir, "meta.json")
    write_cells_csv(cells_path, diagram)
    write_matrix_csv(r0_path, chi_axis, theta_axis, diagram.r0_bar)
    write_matrix_csv(pr_path, chi_axis, theta_axis, diagram.pr_bar)
    derived = {
        "grid": [int(chi_axis.size), int(theta_axis.size)],
        "digest": sweep_digest(chi_axis, theta_axis, template),
        "thresholds": [thresholds[0], thresholds[1]],
        "outputs": ["cells.csv", "diagram_r0.csv", "diagram_pr.csv", "cells.jsonl"],
    }
    _write_meta(meta_path, "sweep", exp, derived, wall)
    print(f"wrote {cells_path}, {r0_path}, {pr_path}, {meta_path} ({wall:.1f}s)")
    return 0


def _progress_printer(args):
    def show(done, total):
        print(f"\r{done}/{total} cells", end="", file=sys.stderr, flush=True)
        if done == total:
            print(file=sys.stderr)

    return show


def cmd_fit(args) -> int:
    try:
        with open(args.series, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or args.column not in reader.fieldnames:
                have = ", ".join(reader.fieldnames or [])
                raise ConfigurationError(
                    f"{args.series}: no column {args.column!r} (have: {have})"
                )
            if "t" not in reader.fieldnames:
                raise ConfigurationError(f"{args.series}: no 't' column")
            times, values = [], []
            for row_no, row in enumerate(reader, start=2):
                try:
                    times.append(float(row["t"]))
                    values.append(float(row[args.column]))
                except (TypeError, ValueError):
                    raise ConfigurationError(
                        f"{args.series}:{row_no}: non-numeric value in "
                        f"'t' or {args.column!r}"
                    ) from None
    except OSError as exc:
        raise ConfigurationError(f"cannot read {args.series}: {exc}") from None
    try:
        fit = fit_power_law(times, values, (args.t_min, args.t_max))
    except ValueError as exc:
        raise ConfigurationError(f"{args.series}: {exc}") from None
    print(
        f"exponent={fit.exponent!r} intercept={fit.intercept!r} "
        f"r_squared={fit.r_squared!r} window=[{fit.fit_window[0]!r}, "
        f"{fit.fit_window[1]!r}] column={args.column}"
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ntqw",
        description="Nonlinear discrete-time quantum walk simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="experiment INI file")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers")
        p.add_argument(
            "--paper-scale",
            action="store_true",
            help=f"override steps={PAPER_STEPS}, ensemble size={PAPER_ENSEMBLE}",
        )
        p.add_argument(
            "--set",
            action="append",
            metavar="SECTION.KEY=VALUE",
            help="override a config value (repeatable)",
        )

    p_evolve = sub.add_parser("evolve", help="run one ensemble, write series/snapshots")
    add_common(p_evolve)
    p_evolve.set_defaults(func=cmd_evolve)

    p_sweep = sub.add_parser("sweep", help="run a (chi, theta0) grid scan")
    add_common(p_sweep)
    p_sweep.add_argument(
        "--resume",
        action="store_true",
        help="continue from an existing cells.jsonl journal",
    )
    p_sweep.add_argument(
        "--progress", action="store_true", help="print per-cell progress to stderr"
    )
    p_sweep.set_defaults(func=cmd_sweep)

    p_fit = sub.add_parser("fit", help="fit a power law to a series.csv column")
    p_fit.add_argument("series", help="series CSV path")
    p_fit.add_argument("--column", required=True, help="column to fit")
    p_fit.add_argument("--t-min", type=float, required=True, dest="t_min")
    p_fit.add_argument("--t-max", type=float, required=True, dest="t_max")
    p_fit.set_defaults(func=cmd_fit)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
