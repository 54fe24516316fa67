"""Diagnostics: site density, return probability, participation,
long-time tail averages, and power-law exponent fits.

Return probability R0(t) is the site probability at the walker's
initial position; participation PR(t) = 1 / sum_n p_n^2 is the
effective number of populated sites. Both are functions of the site
density p_n = |a_n|^2 + |b_n|^2 alone, so they are blind to any pure
phase applied to the amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from .core import WalkerState

__all__ = [
    "ObservableSeries",
    "PowerLawFit",
    "site_density",
    "return_probability",
    "participation",
    "long_time_average",
    "fit_power_law",
    "ensemble_average",
    "sample_times",
]

Snapshot = tuple[int, NDArray[np.float64]]


@dataclass
class ObservableSeries:
    """Time-indexed R0 and PR samples, with optional density snapshots.

    times are the integer steps at which the walk was sampled, strictly
    increasing; r0 and pr align with them. snapshots, when recorded,
    hold (t, full-lattice site-density array) pairs.
    """

    times: NDArray[np.int64]
    r0: NDArray[np.float64]
    pr: NDArray[np.float64]
    snapshots: Optional[list[Snapshot]] = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.int64)
        self.r0 = np.asarray(self.r0, dtype=np.float64)
        self.pr = np.asarray(self.pr, dtype=np.float64)
        if not (len(self.times) == len(self.r0) == len(self.pr)):
            raise ValueError(
                f"length mismatch: {len(self.times)} times, "
                f"{len(self.r0)} r0, {len(self.pr)} pr"
            )
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")
        tol = 1e-9
        if len(self.r0) and (self.r0.min() < -tol or self.r0.max() > 1 + tol):
            raise ValueError("r0 values outside [0, 1]")
        if len(self.pr) and self.pr.min() < 1 - tol:
            raise ValueError("pr values below 1")


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares line on (log t, log value).

    value ~ exp(intercept) * t**exponent over fit_window = (t_min,
    t_max), with r_squared the coefficient of determination in log
    space.
    """

    exponent: float
    intercept: float
    fit_window: tuple[float, float]
    r_squared: float


def site_density(state: WalkerState) -> NDArray[np.float64]:
    """p_n = |a_n|^2 + |b_n|^2 over the full lattice; sums to 1."""
    p = np.zeros(state.num_sites, dtype=np.float64)
    sl = slice(state.lo, state.hi + 1)
    aw, bw = state.a[sl], state.b[sl]
    p[sl] = aw.real**2 + aw.imag**2 + bw.real**2 + bw.imag**2
    return p


def return_probability(state: WalkerState) -> float:
    """Site probability at the walker's initial position, both
    components included."""
    a0 = state.a[state.n_origin]
    b0 = state.b[state.n_origin]
    return float(a0.real**2 + a0.imag**2 + b0.real**2 + b0.imag**2)


def participation(state: WalkerState) -> float:
    """PR = 1 / sum_n p_n^2, the effective number of occupied sites:
    1 for a delta profile, M for a uniform profile over M sites."""
    sl = slice(state.lo, state.hi + 1)
    aw, bw = state.a[sl], state.b[sl]
    p = aw.real**2 + aw.imag**2 + bw.real**2 + bw.imag**2
    return float(1.0 / np.sum(p * p))


def long_time_average(
    series: ObservableSeries, tail_fraction: float = 0.1
) -> tuple[float, float]:
    """Mean r0 and pr over recorded samples with t >= (1 - f) * t_max."""
    if not 0 < tail_fraction <= 1:
        raise ValueError(f"tail_fraction must be in (0, 1], got {tail_fraction}")
    if len(series.times) == 0:
        raise ValueError("series is empty")
    t_max = series.times[-1]
    mask = series.times >= (1.0 - tail_fraction) * t_max
    if not mask.any():
        raise ValueError("tail window holds no samples")
    return float(series.r0[mask].mean()), float(series.pr[mask].mean())


def fit_power_law(times, values, window: tuple[float, float]) -> PowerLawFit:
    """Fit value ~ A * t**exponent on log-log axes over the window.

    Requires at least 3 samples with t_min <= t <= t_max, all strictly
    positive (in t and in value); raises ValueError otherwise rather
    than silently dropping rows.
    """
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if t.shape != v.shape:
        raise ValueError(f"shape mismatch: {t.shape} times vs {v.shape} values")
    t_min, t_max = float(window[0]), float(window[1])
    if not t_min < t_max:
        raise ValueError(f"empty fit window ({t_min}, {t_max})")
    mask = (t >= t_min) & (t <= t_max)
    if mask.sum() < 3:
        raise ValueError(
            f"fit window [{t_min}, {t_max}] holds {int(mask.sum())} samples; need >= 3"
        )
    tw, vw = t[mask], v[mask]
    if np.any(tw <= 0):
        raise ValueError("fit window contains t <= 0")
    if np.any(vw <= 0):
        raise ValueError(
            "fit window contains nonpositive values; power-law fit undefined"
        )
    x, y = np.log(tw), np.log(vw)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return PowerLawFit(
        exponent=float(slope),
        intercept=float(intercept),
        fit_window=(t_min, t_max),
        r_squared=float(r_squared),
    )


def ensemble_average(series_list: list[ObservableSeries]) -> ObservableSeries:
    """Pointwise mean of r0 and pr across samples sharing one time grid.

    Snapshots are averaged per site when every member carries them (at
    identical times); a mix of with- and without-snapshot members is an
    error.
    """
    if not series_list:
        raise ValueError("no series to average")
    first = series_list[0]
    for s in series_list[1:]:
        if not np.array_equal(s.times, first.times):
            raise ValueError("series time grids differ; cannot average")
    r0 = np.mean([s.r0 for s in series_list], axis=0)
    pr = np.mean([s.pr for s in series_list], axis=0)
    have_snaps = [s.snapshots is not None for s in series_list]
    snapshots = None
    if all(have_snaps):
        snap_times = [t for t, _ in first.snapshots]
        for s in series_list[1:]:
            if [t for t, _ in s.snapshots] != snap_times:
                raise ValueError("snapshot schedules differ; cannot average")
        snapshots = [
            (t, np.mean([s.snapshots[k][1] for s in series_list], axis=0))
            for k, t in enumerate(snap_times)
        ]
    elif any(have_snaps):
        raise ValueError("some series carry snapshots and some do not")
    return ObservableSeries(first.times.copy(), r0, pr, snapshots)


def sample_times(
    num_steps: int, num_points: int = 400, include_zero: bool = True
) -> NDArray[np.int64]:
    """Approximately log-spaced even integer sampling times in [2, T].

    Times are rounded to EVEN integers because the walk lives on a
    bipartite lattice: a walker starting at n0 can only revisit n0 at
    even t (each step moves all amplitude to the opposite sublattice),
    so R0 vanishes identically at odd t and would break log-log fits.
    t = 0 is prepended when include_zero.
    """
    if num_steps < 1:
        raise ValueError(f"num_steps must be >= 1, got {num_steps}")
    if num_points < 1:
        raise ValueError(f"num_points must be >= 1, got {num_points}")
    raw = np.logspace(0.0, np.log10(num_steps), num_points)
    even = (np.round(raw / 2.0)).astype(np.int64) * 2
    # clamp, don't filter: the logspace endpoint can overshoot an odd
    # num_steps by one ulp and must not drop the last even step
    top = num_steps - (num_steps % 2)
    even = np.unique(np.minimum(even, top)[even >= 2])
    if include_zero:
        even = np.concatenate(([0], even))
    return even.astype(np.int64)
