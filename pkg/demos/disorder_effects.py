"""
What coin disorder does to spreading
====================================

Frozen spatial disorder tends to pin the walker (Anderson-style), while
disorder refreshed every step acts like noise and washes localization
out. Both are visible in the power-law exponents of the return
probability R0(t) ~ t^a and participation PR(t) ~ t^b on
ensemble-averaged series.

Runtime: three to four minutes (2 x 8 disordered walks of 10^4 steps).
The contrast between the two kinds only develops after a few thousand
steps, so shorter horizons undersell it.
"""

import numpy as np

from ntqw import RunConfig, fit_power_law, run_ensemble

T = 10_000
ENSEMBLE = 8
WINDOW = (1000, 10_000)

print(f"theta0 = pi/4, chi = 0.3, W = 10, T = {T}, {ENSEMBLE} samples")
print(f"{'disorder':<10} {'R0 exponent':>12} {'PR exponent':>12}")

for kind in ("spatial", "temporal"):
    config = RunConfig.create(
        theta0=np.pi / 4,
        chi=0.3,
        kind=kind,
        steps=T,
        ensemble_size=ENSEMBLE,
        base_seed=11,
        width=10.0,
    )
    averaged, _ = run_ensemble(config)
    tail = averaged.times >= 2  # drop t=0 (log fit needs t > 0)
    r0_fit = fit_power_law(averaged.times[tail], averaged.r0[tail], WINDOW)
    pr_fit = fit_power_law(averaged.times[tail], averaged.pr[tail], WINDOW)
    print(f"{kind:<10} {r0_fit.exponent:>12.3f} {pr_fit.exponent:>12.3f}")

# Reading the table: spatial disorder gives a much flatter R0 decay
# (power-law localization, the walker keeps returning) and slow
# subdiffusive PR growth. Temporal disorder erases the memory the
# interference needs, so R0 decays faster and spreading is closer to
# classical diffusion (PR exponent near 0.5).
