"""Nonlinear discrete-time quantum walks on a 1D lattice.

A two-component walker evolves by an intensity-dependent phase (per
spinor component), a one-parameter coin, and a conditional shift. The
package covers the walk kernel, reproducible coin-angle disorder,
return-probability/participation observables with power-law fits, and
deterministic ensemble and (chi, theta0) grid sweeps. The `ntqw`
command drives experiments from INI files and writes CSV outputs.
"""

__version__ = "0.1.0"

from .core import (
    WalkerState,
    new_state,
    apply_kerr_phase,
    apply_coin,
    apply_shift,
    step,
)
from .disorder import (
    GENERATOR_NAME,
    CoinField,
    DisorderKind,
    DisorderSpec,
    make_coin_field,
    theta_for,
)
from .exceptions import BoundaryReached, ConfigurationError
from .observables import (
    ObservableSeries,
    PowerLawFit,
    ensemble_average,
    fit_power_law,
    long_time_average,
    participation,
    return_probability,
    sample_times,
    site_density,
)
from .sweep import (
    DEFAULT_THRESHOLDS,
    LATTICE_MARGIN,
    PhaseDiagram,
    RunConfig,
    cell_seed,
    run_ensemble,
    run_phase_diagram,
    run_single,
)

__all__ = [
    "__version__",
    "WalkerState",
    "new_state",
    "apply_kerr_phase",
    "apply_coin",
    "apply_shift",
    "step",
    "GENERATOR_NAME",
    "CoinField",
    "DisorderKind",
    "DisorderSpec",
    "make_coin_field",
    "theta_for",
    "BoundaryReached",
    "ConfigurationError",
    "ObservableSeries",
    "PowerLawFit",
    "ensemble_average",
    "fit_power_law",
    "long_time_average",
    "participation",
    "return_probability",
    "sample_times",
    "site_density",
    "DEFAULT_THRESHOLDS",
    "LATTICE_MARGIN",
    "PhaseDiagram",
    "RunConfig",
    "cell_seed",
    "run_ensemble",
    "run_phase_diagram",
    "run_single",
]
