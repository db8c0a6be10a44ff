"""Exception types raised across the package."""


class SubsecError(ValueError):
    """Base class for all argument/instance errors."""


class InvalidSetError(SubsecError):
    pass


class ParameterError(SubsecError):
    pass


class SizeLimitError(SubsecError):
    """An exhaustive routine was asked to enumerate too large a ground set."""


class InvalidStreamError(SubsecError):
    pass


class DegenerateInstanceError(SubsecError):
    """Optimum is zero, so a competitive ratio is undefined."""


class InstanceFormatError(SubsecError):
    """An instance or config file could not be read or parsed."""
