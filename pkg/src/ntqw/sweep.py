"""Run orchestration: single walks, disorder ensembles, and (chi,
theta0) grid scans with deterministic seeding and resumable output.

Determinism contract: every result is a pure function of the run
description and the seeds derived from it. Ensemble members use
substreams keyed by (base_seed, sample_index); grid cells derive their
seed from (base_seed, i_chi, i_theta). Parallel execution (thread or
process count, scheduling order) never changes any output byte:
results are always reduced in index order after collection.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import NDArray

from .core import _step_cs, new_state
from .disorder import DisorderKind, DisorderSpec, make_coin_field
from .exceptions import ConfigurationError
from .observables import (
    ObservableSeries,
    ensemble_average,
    long_time_average,
    participation,
    return_probability,
    sample_times,
    site_density,
)

__all__ = [
    "RunConfig",
    "PhaseDiagram",
    "run_single",
    "run_ensemble",
    "run_phase_diagram",
    "LATTICE_MARGIN",
    "DEFAULT_THRESHOLDS",
]

# Extra sites beyond the causal cone on each side; lattice = 2T + 5.
LATTICE_MARGIN = 2

DEFAULT_THRESHOLDS = (0.03, 2.0)

_JOURNAL_SCHEMA = "ntqw.sweep.v1"


@dataclass(frozen=True)
class RunConfig:
    """Complete description of one experiment point.

    theta0/chi/base_seed are the source of truth; disorder carries the
    same theta0 and seed (enforced) plus kind and width. Use
    RunConfig.create to build both consistently.
    """

    theta0: float
    chi: float
    disorder: DisorderSpec
    steps: int
    ensemble_size: int = 1
    base_seed: int = 0
    num_points: int = 400
    snapshot_times: tuple[int, ...] = ()
    tail_fraction: float = 0.1

    def __post_init__(self):
        if not np.isfinite(self.theta0):
            raise ConfigurationError(f"theta0 must be finite, got {self.theta0}")
        if not np.isfinite(self.chi) or self.chi < 0:
            raise ConfigurationError(f"chi must be >= 0, got {self.chi}")
        if self.steps < 1:
            raise ConfigurationError(f"steps must be >= 1, got {self.steps}")
        if self.ensemble_size < 1:
            raise ConfigurationError(
                f"ensemble_size must be >= 1, got {self.ensemble_size}"
            )
        if not 0 <= int(self.base_seed) < 2**64:
            raise ConfigurationError(
                f"base_seed must be a 64-bit nonnegative integer, got {self.base_seed}"
            )
        if not 0 < self.tail_fraction <= 1:
            raise ConfigurationError(
                f"tail_fraction must be in (0, 1], got {self.tail_fraction}"
            )
        if self.num_points < 1:
            raise ConfigurationError(
                f"num_points must be >= 1, got {self.num_points}"
            )
        for t in self.snapshot_times:
            if not 0 <= t <= self.steps:
                raise ConfigurationError(
                    f"snapshot time {t} outside [0, {self.steps}]"
                )
        if self.disorder.theta0 != self.theta0:
            raise ConfigurationError(
                "disorder.theta0 differs from RunConfig.theta0"
            )
        if self.disorder.seed != self.base_seed:
            raise ConfigurationError("disorder.seed differs from RunConfig.base_seed")

    @classmethod
    def create(
        cls,
        theta0: float,
        chi: float,
        kind: DisorderKind | str = DisorderKind.HOMOGENEOUS,
        steps: int = 5000,
        ensemble_size: int = 1,
        base_seed: int = 0,
        width: float = 10.0,
        num_points: int = 400,
        snapshot_times: tuple[int, ...] = (),
        tail_fraction: float = 0.1,
    ) -> "RunConfig":
        if isinstance(kind, str):
            kind = DisorderKind.parse(kind)
        spec = DisorderSpec(kind=kind, theta0=theta0, width=width, seed=base_seed)
        return cls(
            theta0=theta0,
            chi=chi,
            disorder=spec,
            steps=steps,
            ensemble_size=ensemble_size,
            base_seed=base_seed,
            num_points=num_points,
            snapshot_times=tuple(int(t) for t in snapshot_times),
            tail_fraction=tail_fraction,
        )

    def with_point(self, chi: float, theta0: float, base_seed: int) -> "RunConfig":
        """Same experiment at another grid point with its own seed."""
        spec = DisorderSpec(
            kind=self.disorder.kind,
            theta0=theta0,
            width=self.disorder.width,
            seed=base_seed,
        )
        return replace(
            self, theta0=theta0, chi=chi, base_seed=base_seed, disorder=spec
        )

    @property
    def num_sites(self) -> int:
        return 2 * self.steps + 2 * LATTICE_MARGIN + 1

    @property
    def n_origin(self) -> int:
        return self.num_sites // 2

    def times(self) -> NDArray[np.int64]:
        return sample_times(self.steps, self.num_points, include_zero=True)


@dataclass
class PhaseDiagram:
    """Long-time averages over a (chi, theta0) grid with threshold masks.

    Matrices are indexed [i_chi, i_theta]. Masks flag cells whose
    average fell strictly below the corresponding threshold.
    """

    chi_axis: NDArray[np.float64]
    theta_axis: NDArray[np.float64]
    r0_bar: NDArray[np.float64]
    pr_bar: NDArray[np.float64]
    mask_r0: NDArray[np.bool_]
    mask_pr: NDArray[np.bool_]
    thresholds: tuple[float, float] = DEFAULT_THRESHOLDS

    @classmethod
    def from_values(cls, chi_axis, theta_axis, r0_bar, pr_bar, thresholds):
        r0_thr, pr_thr = thresholds
        return cls(
            chi_axis=np.asarray(chi_axis, dtype=np.float64),
            theta_axis=np.asarray(theta_axis, dtype=np.float64),
            r0_bar=r0_bar,
            pr_bar=pr_bar,
            mask_r0=r0_bar < r0_thr,
            mask_pr=pr_bar < pr_thr,
            thresholds=(float(r0_thr), float(pr_thr)),
        )


def _evolve_recording(config: RunConfig, sample_index: int):
    """Evolve one walk, recording observables on the sampling schedule.

    Returns (series, final_norm_sq). The coin trigonometry is hoisted
    out of the step loop: spatial fields cost two cos/sin arrays per
    run, temporal fields two vectorized calls over the step stream.
    """
    T = config.steps
    num_sites = config.num_sites
    n_origin = config.n_origin
    field_ = make_coin_field(config.disorder, sample_index, num_sites, T)
    state = new_state(num_sites, n_origin)

    times = config.times()
    record_at = np.zeros(T + 1, dtype=bool)
    record_at[times] = True
    snap_at = np.zeros(T + 1, dtype=bool)
    for t in config.snapshot_times:
        snap_at[t] = True
    want_snaps = bool(config.snapshot_times)

    kind = field_.kind
    if kind is DisorderKind.SPATIAL:
        thetas = np.asarray(field_.data, dtype=np.float64)
        c_all, s_all = np.cos(thetas), np.sin(thetas)
    elif kind is DisorderKind.TEMPORAL:
        stream = np.asarray(field_.data, dtype=np.float64)
        c_steps, s_steps = np.cos(stream), np.sin(stream)
    else:
        c0 = float(np.cos(field_.data))
        s0 = float(np.sin(field_.data))

    r0 = np.empty(len(times), dtype=np.float64)
    pr = np.empty(len(times), dtype=np.float64)
    snapshots: list[tuple[int, NDArray[np.float64]]] = []
    k = 0
    if record_at[0]:
        r0[k] = return_probability(state)
        pr[k] = participation(state)
        k += 1
    if want_snaps and snap_at[0]:
        snapshots.append((0, site_density(state)))

    chi = config.chi
    for t in range(1, T + 1):
        if kind is DisorderKind.SPATIAL:
            _step_cs(state, chi, c_all, s_all)
        elif kind is DisorderKind.TEMPORAL:
            _step_cs(state, chi, float(c_steps[t - 1]), float(s_steps[t - 1]))
        else:
            _step_cs(state, chi, c0, s0)
        if record_at[t]:
            r0[k] = return_probability(state)
            pr[k] = participation(state)
            k += 1
        if want_snaps and snap_at[t]:
            snapshots.append((t, site_density(state)))

    norm = state.norm_sq()
    if abs(norm - 1.0) > 1e-9:
        raise RuntimeError(
            f"norm drifted to {norm!r} after {T} steps; numerical invariant broken"
        )
    series = ObservableSeries(times, r0, pr, snapshots if want_snaps else None)
    return series, norm


def run_single(config: RunConfig, sample_index: int = 0) -> ObservableSeries:
    """One walk for one ensemble member; deterministic in
    (config, sample_index)."""
    series, _ = _evolve_recording(config, sample_index)
    return series


def _ensemble_task(payload):
    config, sample_index = payload
    t0 = time.perf_counter()
    series, norm = _evolve_recording(config, sample_index)
    meta = {
        "sample_index": sample_index,
        "seed_path": [config.base_seed, sample_index],
        "final_norm_sq": norm,
        "wall_time_s": time.perf_counter() - t0,
    }
    return series, meta


def run_ensemble(
    config: RunConfig, jobs: int = 1, progress=None, keep_samples: bool = False
) -> tuple[ObservableSeries, list[dict]]:
    """Average over ensemble members 0..ensemble_size-1.

    Homogeneous disorder collapses to a single effective sample (every
    member would be identical). Members run in parallel when jobs > 1;
    the average is reduced in sample order regardless of completion
    order, so the result is independent of jobs. With keep_samples each
    metadata dict also carries its member's series.
    """
    effective = (
        1
        if config.disorder.kind is DisorderKind.HOMOGENEOUS
        else config.ensemble_size
    )
    payloads = [(config, i) for i in range(effective)]
    if jobs > 1 and effective > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, effective)) as pool:
            results = list(pool.map(_ensemble_task, payloads))
    else:
        results = []
        for p in payloads:
            results.append(_ensemble_task(p))
            if progress is not None:
                progress(len(results), effective)
    series_list = [r[0] for r in results]
    metas = [r[1] for r in results]
    for m, s in zip(metas, series_list):
        m["effective_ensemble"] = effective
        if keep_samples:
            m["series"] = s
    return ensemble_average(series_list), metas


def cell_seed(base_seed: int, i_chi: int, i_theta: int) -> int:
    """64-bit seed for one grid cell, derived so cells are decorrelated
    and independent of sweep scheduling."""
    ss = np.random.SeedSequence([int(base_seed), int(i_chi), int(i_theta)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sweep_digest(chi_axis, theta_axis, template: RunConfig) -> str:
    """Fingerprint of everything that determines sweep results; stored
    in the journal so a resume against a different sweep is refused."""
    payload = {
        "chi_axis": [repr(float(c)) for c in chi_axis],
        "theta_axis": [repr(float(t)) for t in theta_axis],
        "kind": template.disorder.kind.value,
        "width": repr(float(template.disorder.width)),
        "steps": template.steps,
        "ensemble_size": template.ensemble_size,
        "base_seed": template.base_seed,
        "num_points": template.num_points,
        "tail_fraction": repr(float(template.tail_fraction)),
    }
    text = json.dumps(payload, sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _cell_task(payload):
    template, i, j, chi, theta0, seed = payload
    cfg = template.with_point(chi=chi, theta0=theta0, base_seed=seed)
    avg, _ = run_ensemble(cfg, jobs=1)
    r0_bar, pr_bar = long_time_average(avg, cfg.tail_fraction)
    return i, j, r0_bar, pr_bar


def _read_journal(path, digest):
    done = {}
    if not os.path.exists(path):
        return done
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                raise ConfigurationError(
                    f"{path}:{line_no}: journal line is not valid JSON"
                ) from None
            if rec.get("schema") != _JOURNAL_SCHEMA:
                raise ConfigurationError(
                    f"{path}:{line_no}: unknown journal schema {rec.get('schema')!r}"
                )
            if rec.get("digest") != digest:
                raise ConfigurationError(
                    f"{path}:{line_no}: journal belongs to a different sweep "
                    f"(digest {rec.get('digest')!r}, expected {digest!r})"
                )
            if "i_chi" in rec:
                done[(rec["i_chi"], rec["i_theta"])] = (
                    float(rec["r0_bar"]),
                    float(rec["pr_bar"]),
                )
    return done


def run_phase_diagram(
    chi_axis,
    theta_axis,
    template: RunConfig,
    thresholds: tuple[float, float] = DEFAULT_THRESHOLDS,
    jobs: int = 1,
    journal_path=None,
    progress=None,
) -> PhaseDiagram:
    """Grid scan over (chi, theta0); each cell runs a full ensemble.

    With journal_path, per-cell results are appended to a JSONL file as
    they finish; rerunning with the same journal skips finished cells,
    and the assembled diagram is identical to an uninterrupted run (the
    matrices are filled by cell index, never by completion order).
    """
    chi_axis = np.asarray(chi_axis, dtype=np.float64)
    theta_axis = np.asarray(theta_axis, dtype=np.float64)
    if chi_axis.size == 0 or theta_axis.size == 0:
        raise ConfigurationError("phase-diagram axes must be nonempty")
    if thresholds[0] <= 0 or thresholds[1] <= 0:
        raise ConfigurationError(f"thresholds must be > 0, got {thresholds}")
    digest = sweep_digest(chi_axis, theta_axis, template)

    done = {}
    journal_fh = None
    if journal_path is not None:
        done = _read_journal(journal_path, digest)
        journal_fh = open(journal_path, "a", encoding="utf-8")
        if not done and os.path.getsize(journal_path) == 0:
            header = {"schema": _JOURNAL_SCHEMA, "digest": digest}
            journal_fh.write(json.dumps(header, sort_keys=True) + "\n")
            journal_fh.flush()

    pending = []
    for i, chi in enumerate(chi_axis):
        for j, theta0 in enumerate(theta_axis):
            if (i, j) in done:
                continue
            pending.append(
                (template, i, j, float(chi), float(theta0), cell_seed(template.base_seed, i, j))
            )

    total = chi_axis.size * theta_axis.size
    finished = len(done)

    def note(i, j, r0_bar, pr_bar):
        nonlocal finished
        finished += 1
        done[(i, j)] = (r0_bar, pr_bar)
        if journal_fh is not None:
            rec = {
                "schema": _JOURNAL_SCHEMA,
                "digest": digest,
                "i_chi": i,
                "i_theta": j,
                "chi": repr(float(chi_axis[i])),
                "theta0": repr(float(theta_axis[j])),
                "r0_bar": r0_bar,
                "pr_bar": pr_bar,
            }
            journal_fh.write(json.dumps(rec, sort_keys=True) + "\n")
            journal_fh.flush()
        if progress is not None:
            progress(finished, total)

    try:
        if jobs > 1 and pending:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = {pool.submit(_cell_task, p): p for p in pending}
                for fut in as_completed(futures):
                    i, j, r0_bar, pr_bar = fut.result()
                    note(i, j, r0_bar, pr_bar)
        else:
            for p in pending:
                i, j, r0_bar, pr_bar = _cell_task(p)
                note(i, j, r0_bar, pr_bar)
    finally:
        if journal_fh is not None:
            journal_fh.close()

    r0_bar = np.empty((chi_axis.size, theta_axis.size), dtype=np.float64)
    pr_bar = np.empty_like(r0_bar)
    for (i, j), (rv, pv) in done.items():
        r0_bar[i, j] = rv
        pr_bar[i, j] = pv
    return PhaseDiagram.from_values(chi_axis, theta_axis, r0_bar, pr_bar, thresholds)
