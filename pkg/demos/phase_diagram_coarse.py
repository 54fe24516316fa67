"""
A pocket phase diagram
======================

Long-time averages of R0 on a tiny (chi, theta0) grid, printed as an
ASCII map. '#' marks self-trapped cells, '.' marks escaping ones. Even
at this resolution the trapped region hugging theta0 = pi/2 is obvious.

Runtime: about a minute.
"""

import numpy as np

from ntqw import RunConfig, run_phase_diagram

chi_axis = np.linspace(0.0, 1.0, 6)
theta_axis = np.linspace(np.pi / 12, np.pi / 2, 6)

template = RunConfig.create(
    theta0=float(theta_axis[0]),
    chi=float(chi_axis[0]),
    kind="homogeneous",
    steps=1500,
    base_seed=11,
)

diagram = run_phase_diagram(chi_axis, theta_axis, template)

print("tail-averaged R0 (rows: chi, columns: theta0 from pi/12 to pi/2)")
print()
header = "        " + "".join(f"{t / np.pi:>7.3f}" for t in theta_axis) + "   (theta0/pi)"
print(header)
for i, chi in enumerate(chi_axis):
    cells = "".join(f"{diagram.r0_bar[i, j]:>7.3f}" for j in range(len(theta_axis)))
    marks = " ".join("#" if diagram.r0_bar[i, j] > 0.5 else "." for j in range(len(theta_axis)))
    print(f"chi={chi:4.2f}{cells}   {marks}")

print()
print("'#' = tail R0 above 0.5 (self-trapped), '.' = below")
