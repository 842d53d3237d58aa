"""Exception hierarchy shared by all modules."""


class HCBError(Exception):
    """Base class for library errors."""


class InvalidInputError(HCBError, ValueError):
    """Argument violates a documented precondition."""


class NotPSDError(InvalidInputError):
    """Matrix has an eigenvalue below the PSD clamp threshold."""


class DomainError(InvalidInputError):
    """Closed form evaluated outside its domain of validity."""


class UnphysicalCorrelatorsError(InvalidInputError):
    """Correlators do not assemble into a valid two-site density matrix."""


class UnsupportedInputError(InvalidInputError):
    """Input is well formed but outside what the measure is defined for."""


class ResourceLimitError(HCBError):
    """Requested problem exceeds the dense-matrix memory guard."""
