"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """An iterative numerical procedure failed to reach its tolerance."""


class UnsupportedTopologyError(ValueError):
    """Orbit topology the classical solvers refuse, e.g. a below-barrier double well."""
