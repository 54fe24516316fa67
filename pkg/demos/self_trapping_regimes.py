"""
Three faces of nonlinear self-trapping
======================================

The same walk equations produce qualitatively different long-time
behavior depending on (theta0, chi): a soliton-like pair that departs
the origin carrying its shape, a near-complete bound state at
theta0 = pi/2, and everything in between. This script runs three
homogeneous walks and prints the numbers that separate the regimes.

Runtime: about half a minute.
"""

import numpy as np

from ntqw import RunConfig, long_time_average, run_single

T = 3000

POINTS = [
    ("travelling (pi/4, chi=0.3)", np.pi / 4, 0.3),
    ("strong kick (pi/3, chi=0.6)", np.pi / 3, 0.6),
    ("bound coin  (pi/2, chi=0.6)", np.pi / 2, 0.6),
]

print(f"single homogeneous walks, T = {T}")
print(f"{'point':<30} {'tail R0':>9} {'tail PR':>9}  verdict")

for label, theta0, chi in POINTS:
    config = RunConfig.create(theta0=theta0, chi=chi, steps=T)
    series = run_single(config, 0)
    r0_bar, pr_bar = long_time_average(series, 0.1)
    if r0_bar > 0.5 and pr_bar < 3:
        verdict = "pinned at the origin"
    elif pr_bar < 20:
        verdict = "compact moving peak(s)"
    else:
        verdict = "spreading"
    print(f"{label:<30} {r0_bar:>9.4f} {pr_bar:>9.2f}  {verdict}")

# The travelling point keeps a tiny participation (two solitons plus a
# thin background) while its return probability drains away; the pi/2
# coin is an exact period-2 oscillation that never leaves the origin.
