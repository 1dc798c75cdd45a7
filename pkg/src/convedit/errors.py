"""Exception types shared across the package."""


class ConvEditError(Exception):
    """Base class for all package errors."""


class InvalidInputError(ConvEditError):
    pass


class CyclicDependencyError(ConvEditError):
    pass


class EmptyRewriteError(ConvEditError):
    pass


class BoundExceededError(ConvEditError):
    pass


class DatasetError(ConvEditError):
    pass


class CheckpointError(ConvEditError):
    pass
