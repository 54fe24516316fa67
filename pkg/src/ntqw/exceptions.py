"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid parameter, experiment file, or run description."""


class BoundaryReached(RuntimeError):
    """Nonzero amplitude was about to leave the lattice.

    Raised by the shift when the outermost populated site sits on the
    array edge; it means the lattice was sized too small for the number
    of steps requested.
    """
