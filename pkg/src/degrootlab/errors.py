"""Exception types shared across the package."""


class SolverError(RuntimeError):
    """A numerical procedure failed to produce a valid result."""


class InconsistentObservationError(SolverError):
    """An observed network matches no candidate choice history."""


class ScaleError(ValueError):
    """A candidate space is too large to enumerate."""


class ConfigError(ValueError):
    """A scenario configuration is missing, malformed, or out of domain."""
