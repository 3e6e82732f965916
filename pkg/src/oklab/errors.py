"""Exception taxonomy shared by all modules.

Exit-code mapping used by the CLI: validation errors exit 2, resource
limits exit 3, internal-consistency failures exit 4.
"""


class OklabError(Exception):
    """Base class for all library errors."""


class ValidationError(OklabError):
    """Bad user input (dimensions, schemas, preconditions)."""


class DimensionMismatchError(ValidationError):
    pass


class NotASubgroupError(ValidationError):
    pass


class MeasureMismatchError(ValidationError):
    """Reference lattice does not match the affine hull of the body."""


class InvalidRayError(ValidationError):
    pass


class UnsupportedSemigroupError(ValidationError):
    """Operation needs a strongly non-negative (or polyhedral) input."""


class EmptyTruncationError(ValidationError):
    pass


class UnsupportedIdealError(ValidationError):
    """Operation needs an equigenerated (or m-primary) monomial ideal."""


class ResourceLimitError(OklabError):
    """Enumeration exceeded the configured memory guard."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class InternalConsistencyError(OklabError):
    """Held-out verification failed; signals a bug, not a user error."""


class RegularityNotReachedError(OklabError):
    """Polynomial fit did not stabilize within the iteration cap."""

    def __init__(self, message, last_fits=None):
        super().__init__(message)
        self.last_fits = last_fits
