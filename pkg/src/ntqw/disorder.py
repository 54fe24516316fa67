"""Reproducible coin-angle fields: homogeneous, spatial, or temporal.

Inhomogeneity enters only through the coin angle, theta = theta0 +
delta with delta drawn uniformly from [-W/2, W/2]. Spatial fields draw
one delta per site, frozen for the whole run; temporal fields draw one
delta per step, applied to every site at that step. Angles are used
as-is by cos/sin, so values far outside [0, 2pi) are fine and W = 10 is
the working default.

Every field is a pure function of (seed, sample_index): sample streams
are derived with SeedSequence([seed, sample_index]) so ensemble members
are decorrelated and reproducible independent of execution order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .exceptions import ConfigurationError

__all__ = [
    "DisorderKind",
    "DisorderSpec",
    "CoinField",
    "make_coin_field",
    "theta_for",
    "GENERATOR_NAME",
]

# Recorded in run metadata: determinism is promised within this
# implementation, not across RNG algorithms.
GENERATOR_NAME = "numpy.random.PCG64/SeedSequence"


class DisorderKind(enum.Enum):
    HOMOGENEOUS = "homogeneous"
    SPATIAL = "spatial"
    TEMPORAL = "temporal"

    @classmethod
    def parse(cls, text: str) -> "DisorderKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ConfigurationError(
                f"unknown disorder kind {text!r}; expected one of: {valid}"
            ) from None


@dataclass(frozen=True)
class DisorderSpec:
    """What to draw: kind, reference angle, full width, master seed."""

    kind: DisorderKind
    theta0: float
    width: float = 10.0
    seed: int = 0

    def __post_init__(self):
        if not np.isfinite(self.theta0):
            raise ConfigurationError(f"theta0 must be finite, got {self.theta0}")
        if not np.isfinite(self.width) or self.width < 0:
            raise ConfigurationError(f"width must be >= 0, got {self.width}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError(
                f"seed must be a 64-bit nonnegative integer, got {self.seed}"
            )


@dataclass(frozen=True)
class CoinField:
    """Angles actually applied during one run.

    data holds a scalar (homogeneous), a per-site array of num_sites
    angles (spatial), or a per-step array of num_steps angles
    (temporal). seed/sample_index record provenance.
    """

    kind: DisorderKind
    data: float | NDArray[np.float64]
    num_sites: int
    num_steps: int
    seed: int
    sample_index: int

    def theta_for(self, n: int, t: int) -> float:
        return theta_for(self, n, t)

    def at_step(self, t: int):
        """Angle argument for the step taking time t to t+1: a scalar,
        or the per-site array for spatial fields."""
        if self.kind is DisorderKind.SPATIAL:
            return self.data
        if self.kind is DisorderKind.TEMPORAL:
            if not 0 <= t < self.num_steps:
                raise IndexError(
                    f"step index {t} outside [0, {self.num_steps})"
                )
            return float(self.data[t])
        return self.data


def make_coin_field(
    spec: DisorderSpec, sample_index: int, num_sites: int, num_steps: int
) -> CoinField:
    """Draw the field for one ensemble member.

    Deterministic in (spec.seed, sample_index): the same inputs always
    give the identical field, whatever thread or process evaluates it.
    Homogeneous fields consume no random draws.
    """
    if num_sites < 1 or num_steps < 1:
        raise ConfigurationError(
            f"num_sites and num_steps must be positive, got {num_sites}, {num_steps}"
        )
    if sample_index < 0:
        raise ConfigurationError(f"sample_index must be >= 0, got {sample_index}")
    if spec.kind is DisorderKind.HOMOGENEOUS:
        data: float | NDArray[np.float64] = float(spec.theta0)
    else:
        rng = np.random.default_rng(
            np.random.SeedSequence([int(spec.seed), int(sample_index)])
        )
        half = spec.width / 2.0
        count = num_sites if spec.kind is DisorderKind.SPATIAL else num_steps
        data = spec.theta0 + rng.uniform(-half, half, size=count)
        data.setflags(write=False)
    return CoinField(
        kind=spec.kind,
        data=data,
        num_sites=num_sites,
        num_steps=num_steps,
        seed=int(spec.seed),
        sample_index=int(sample_index),
    )


def theta_for(field: CoinField, n: int, t: int) -> float:
    """Angle applied at site n during the step taking time t to t+1."""
    if not 0 <= n < field.num_sites:
        raise IndexError(f"site index {n} outside [0, {field.num_sites})")
    if not 0 <= t < field.num_steps:
        raise IndexError(f"step index {t} outside [0, {field.num_steps})")
    if field.kind is DisorderKind.HOMOGENEOUS:
        return float(field.data)
    if field.kind is DisorderKind.SPATIAL:
        return float(field.data[n])
    return float(field.data[t])
