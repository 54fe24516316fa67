"""Walker state and one exact step of the nonlinear discrete-time walk.

The walker carries a two-component spinor amplitude (a_n, b_n) on every
site n of a finite 1D lattice. One step applies, in order:

1. an intensity-dependent phase on each spinor component separately,
   amp -> amp * exp(-i 2 pi chi |amp|^2),
2. the coin  [[cos t, sin t], [sin t, -cos t]]  with t = theta(n),
3. the conditional shift a_n -> a_{n+1}, b_n -> b_{n-1}.

All three factors preserve the norm exactly in exact arithmetic. The
update mutates the state in place and returns it; callers that need the
previous state must copy() first. A tracked support window [lo, hi]
keeps per-step cost proportional to the populated region, which grows
by at most one site per side per step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .exceptions import BoundaryReached, ConfigurationError

__all__ = [
    "WalkerState",
    "new_state",
    "apply_kerr_phase",
    "apply_coin",
    "apply_shift",
    "step",
]

_TWO_PI = 2.0 * np.pi


@dataclass
class WalkerState:
    """Spinor amplitudes over the lattice plus bookkeeping.

    Attributes
    ----------
    a, b : complex128 arrays of equal length
        Right-mover and left-mover amplitudes per site.
    n_origin : int
        Index of the walker's initial site.
    t : int
        Step counter, incremented by :func:`step`.
    lo, hi : int
        Inclusive bounds of the populated window; sites outside it are
        exactly zero. Computed from the amplitudes when not given.
    """

    a: NDArray[np.complex128]
    b: NDArray[np.complex128]
    n_origin: int
    t: int = 0
    lo: int = field(default=-1)
    hi: int = field(default=-1)

    def __post_init__(self):
        if self.lo < 0 or self.hi < 0:
            occupied = np.flatnonzero((self.a != 0) | (self.b != 0))
            if occupied.size:
                self.lo = int(occupied[0])
                self.hi = int(occupied[-1])
            else:
                self.lo = self.hi = self.n_origin

    @property
    def num_sites(self) -> int:
        return self.a.shape[0]

    def norm_sq(self) -> float:
        sl = slice(self.lo, self.hi + 1)
        aw, bw = self.a[sl], self.b[sl]
        return float(
            np.sum(aw.real**2 + aw.imag**2) + np.sum(bw.real**2 + bw.imag**2)
        )

    def copy(self) -> WalkerState:
        return WalkerState(
            self.a.copy(), self.b.copy(), self.n_origin, self.t, self.lo, self.hi
        )


def new_state(num_sites: int, n_origin: int) -> WalkerState:
    """Walker localized at n_origin in the spinor state (1, i)/sqrt(2).

    Parameters
    ----------
    num_sites : positive int
        Lattice length. Size it at least 2*T + 1 for T planned steps so
        the open boundary is never touched (support grows one site per
        side per step).
    n_origin : int
        Initial site, 0 <= n_origin < num_sites.
    """
    if num_sites < 1:
        raise ConfigurationError(f"num_sites must be positive, got {num_sites}")
    if not 0 <= n_origin < num_sites:
        raise ConfigurationError(
            f"n_origin {n_origin} outside lattice of {num_sites} sites"
        )
    a = np.zeros(num_sites, dtype=np.complex128)
    b = np.zeros(num_sites, dtype=np.complex128)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    a[n_origin] = inv_sqrt2
    b[n_origin] = 1j * inv_sqrt2
    return WalkerState(a, b, n_origin, t=0, lo=n_origin, hi=n_origin)


def _coin_cs(theta_at, num_sites: int):
    """Normalize a coin-angle argument to (cos, sin): scalars for a
    scalar angle, full-lattice arrays for a per-site field."""
    th = np.asarray(theta_at, dtype=np.float64)
    if th.ndim == 0:
        return float(np.cos(th)), float(np.sin(th))
    if th.shape[0] != num_sites:
        raise ConfigurationError(
            f"theta_at has {th.shape[0]} entries for {num_sites} sites"
        )
    return np.cos(th), np.sin(th)


def _kerr_factors(aw, bw, chi: float):
    """Unit-modulus factors exp(-i 2 pi chi |amp|^2) per component."""
    k = -_TWO_PI * chi
    fa = np.exp(1j * (k * (aw.real**2 + aw.imag**2)))
    fb = np.exp(1j * (k * (bw.real**2 + bw.imag**2)))
    return fa, fb


def apply_kerr_phase(state: WalkerState, chi: float) -> WalkerState:
    """Intensity-dependent phase, each component from its own intensity.

    a_n -> a_n * exp(-i 2 pi chi |a_n|^2) and likewise for b_n. Every
    |amplitude| is unchanged, so site densities and everything derived
    from them are invariant. chi = 0 is the identity.
    """
    if chi < 0:
        raise ConfigurationError(f"chi must be >= 0, got {chi}")
    if chi == 0:
        return state
    sl = slice(state.lo, state.hi + 1)
    aw, bw = state.a[sl], state.b[sl]
    fa, fb = _kerr_factors(aw, bw, chi)
    state.a[sl] = aw * fa
    state.b[sl] = bw * fb
    return state


def apply_coin(state: WalkerState, theta_at) -> WalkerState:
    """Mix the spinor components site by site.

    theta_at is the coin angle per site: a scalar (same angle
    everywhere) or an array indexed by absolute site. With c = cos
    theta, s = sin theta the update is

        a_n <- c a_n + s b_n
        b_n <- s a_n - c b_n

    reading the pre-update pair on the right. The matrix is real,
    symmetric, unitary, and involutive.
    """
    c, s = _coin_cs(theta_at, state.num_sites)
    sl = slice(state.lo, state.hi + 1)
    if isinstance(c, np.ndarray):
        c, s = c[sl], s[sl]
    aw, bw = state.a[sl], state.b[sl]
    na = c * aw + s * bw
    nb = s * aw - c * bw
    state.a[sl] = na
    state.b[sl] = nb
    return state


def apply_shift(state: WalkerState) -> WalkerState:
    """Move a-amplitudes one site right and b-amplitudes one site left.

    Raises BoundaryReached if a nonzero amplitude would leave the
    array; a zero amplitude sitting on the edge is harmless.
    """
    na = state.a[state.lo : state.hi + 1].copy()
    nb = state.b[state.lo : state.hi + 1].copy()
    _place_shifted(state, na, nb)
    return state


def _place_shifted(state: WalkerState, na, nb):
    """Write post-coin window buffers back, displaced one site right (a)
    and left (b); update the support bounds. Guards the open boundary."""
    lo, hi = state.lo, state.hi
    n = state.num_sites
    if hi == n - 1 and na[-1] != 0:
        raise BoundaryReached(
            f"right-moving amplitude at site {hi} would leave the lattice"
        )
    if lo == 0 and nb[0] != 0:
        raise BoundaryReached(
            "left-moving amplitude at site 0 would leave the lattice"
        )
    if hi == n - 1:
        state.a[lo + 1 :] = na[:-1]
    else:
        state.a[lo + 1 : hi + 2] = na
    state.a[lo] = 0
    if lo == 0:
        state.b[:hi] = nb[1:]
    else:
        state.b[lo - 1 : hi] = nb
    state.b[hi] = 0
    state.lo = max(lo - 1, 0)
    state.hi = min(hi + 1, n - 1)


def _step_cs(state: WalkerState, chi: float, c, s) -> WalkerState:
    """Fused step body taking precomputed cos/sin (scalars, or arrays
    over the full lattice). Used by step() and by the run loop, which
    computes the trigonometry once per field instead of per step."""
    sl = slice(state.lo, state.hi + 1)
    aw, bw = state.a[sl], state.b[sl]
    if chi != 0:
        fa, fb = _kerr_factors(aw, bw, chi)
        aw = aw * fa
        bw = bw * fb
    if isinstance(c, np.ndarray):
        c, s = c[sl], s[sl]
    na = c * aw + s * bw
    nb = s * aw - c * bw
    _place_shifted(state, na, nb)
    state.t += 1
    return state


def step(state: WalkerState, chi: float, theta_at) -> WalkerState:
    """One full walk step: phase, then coin, then shift; t advances by 1.

    Identical to apply_shift(apply_coin(apply_kerr_phase(state, chi),
    theta_at)) including floating-point rounding; fused so the hot loop
    touches the populated window once.
    """
    if chi < 0:
        raise ConfigurationError(f"chi must be >= 0, got {chi}")
    c, s = _coin_cs(theta_at, state.num_sites)
    return _step_cs(state, chi, c, s)
