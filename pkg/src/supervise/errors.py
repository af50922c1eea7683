"""Exception taxonomy for domain and feasibility failures.

Every error raised by the library derives from :class:`SuperviseError`, so the
CLI can map any of them to exit code 1 with a one-line reason.
"""


class SuperviseError(ValueError):
    """Base class for domain and feasibility errors."""


class EffortDomainError(SuperviseError):
    """An effort or variance value lies outside the effort function's domain."""


class InvalidTargetError(SuperviseError):
    """A derivative target passed to the solver is not a finite real."""


class NoIncentiveError(SuperviseError):
    """Zero verification probability: the loss has no interior minimizer."""


class EpsilonRangeError(SuperviseError):
    """The truthfulness threshold is outside the range an operation requires."""


class SizingError(SuperviseError):
    """A structure request cannot be satisfied at the given sizes."""


class AssumptionError(SuperviseError):
    """A population-level modeling assumption is violated."""


class InstanceTooLargeError(SuperviseError):
    """The exact solver's instance cap is exceeded."""


class ModelMismatchError(SuperviseError):
    """An answer model was paired with an incompatible structure or strategy."""
