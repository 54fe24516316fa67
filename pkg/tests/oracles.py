"""Independent reference implementations used to cross-check the engine.

Everything here is deliberately written in a different style from the
package: dense matrices and dict-based scalar loops instead of windowed
array updates. Slow and simple on purpose; test-only.
"""
import cmath
import math

import numpy as np

TWO_PI = 2.0 * math.pi


def dense_linear_step_matrix(num_sites: int, thetas) -> np.ndarray:
    """Full 2N x 2N matrix for one linear step (coin then shift).

    Basis ordering: (a_0 .. a_{N-1}, b_0 .. b_{N-1}). Amplitude that would
    be shifted past either edge is dropped, so the matrix is only unitary
    on states whose support stays interior; callers size accordingly.
    """
    n = int(num_sites)
    th = np.broadcast_to(np.asarray(thetas, dtype=float), (n,))
    c, s = np.cos(th), np.sin(th)
    coin = np.zeros((2 * n, 2 * n))
    coin[:n, :n] = np.diag(c)
    coin[:n, n:] = np.diag(s)
    coin[n:, :n] = np.diag(s)
    coin[n:, n:] = -np.diag(c)
    shift = np.zeros((2 * n, 2 * n))
    shift[:n, :n] = np.eye(n, k=-1)   # a'_{i} = a_{i-1}
    shift[n:, n:] = np.eye(n, k=1)    # b'_{i} = b_{i+1}
    return shift @ coin


def dense_evolve(a0, b0, chi, theta_for_step, steps, kerr_sign=-1.0):
    """Evolve by explicit matrix-vector products.

    theta_for_step(t) must return the per-site angle array used at step t
    (t = 1..steps). kerr_sign matches the engine's shipped phase direction.
    """
    n = len(a0)
    v = np.concatenate([np.asarray(a0, complex), np.asarray(b0, complex)])
    for t in range(1, steps + 1):
        if chi != 0.0:
            v = v * np.exp(kerr_sign * 1j * TWO_PI * chi * np.abs(v) ** 2)
        v = dense_linear_step_matrix(n, theta_for_step(t)) @ v
    return v[:n], v[n:]


def brute_force_evolve(a0: dict, b0: dict, chi, theta_at, steps,
                       kerr_sign=-1.0):
    """Pure-python dict walk: site -> amplitude, no numpy.

    theta_at(t, n) gives the coin angle for site n at step t.
    Returns (a, b) dicts holding only nonzero amplitudes.
    """
    a, b = dict(a0), dict(b0)
    for t in range(1, steps + 1):
        na, nb = {}, {}
        for n in set(a) | set(b):
            aa = a.get(n, 0j)
            bb = b.get(n, 0j)
            if chi != 0.0:
                ga = TWO_PI * chi * (aa.real * aa.real + aa.imag * aa.imag)
                gb = TWO_PI * chi * (bb.real * bb.real + bb.imag * bb.imag)
                aa *= cmath.exp(kerr_sign * 1j * ga)
                bb *= cmath.exp(kerr_sign * 1j * gb)
            th = theta_at(t, n)
            c, s = math.cos(th), math.sin(th)
            ca = c * aa + s * bb
            cb = s * aa - c * bb
            if ca != 0j:
                na[n + 1] = ca
            if cb != 0j:
                nb[n - 1] = cb
        a, b = na, nb
    return a, b


def densities_from_dicts(a: dict, b: dict) -> dict:
    p = {}
    for n, amp in a.items():
        p[n] = p.get(n, 0.0) + abs(amp) ** 2
    for n, amp in b.items():
        p[n] = p.get(n, 0.0) + abs(amp) ** 2
    return p


def ks_statistic_uniform(samples, lo: float, hi: float) -> float:
    """Two-sided KS statistic against Uniform[lo, hi]."""
    x = np.sort((np.asarray(samples, dtype=float) - lo) / (hi - lo))
    k = len(x)
    i = np.arange(1, k + 1)
    return float(max((i / k - x).max(), (x - (i - 1) / k).max()))
