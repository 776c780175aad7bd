"""Exception types shared across the decolab modules."""


class DecolabError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DecolabError):
    """An argument lies outside the mathematical domain of an operation."""


class TruncationError(DecolabError):
    """The Fock-space cutoff is too small to represent the requested state."""


class QuadratureError(DecolabError):
    """Numerical quadrature failed to reach the requested tolerance."""


class StabilityError(DecolabError):
    """Time integration produced an unacceptable conserved-quantity drift."""


class StepError(DecolabError):
    """Requested snapshot times are incompatible with the integrator step."""


class CoverageError(DecolabError):
    """A phase-space or position grid does not cover the state's support."""


class NoFringeError(DecolabError):
    """The position density has no interference minimum to measure."""


class ConfigError(DecolabError):
    """A scenario file or override is malformed or names unknown fields."""
