"""Exception types shared across the toolkit."""


class MkvError(Exception):
    """Base class for all toolkit errors."""


class NonPositive(MkvError):
    """A quantity that must be strictly positive is not."""


class NonDivisibleStep(MkvError):
    """The step does not divide the requested horizon."""


class OutOfRange(MkvError):
    """A time lies outside the grid's span."""


class GridMismatch(MkvError):
    """Two objects do not share the same time grid."""


class DimensionMismatch(MkvError):
    """Media vectors of different dimension were combined."""


class SizeMismatch(MkvError):
    """Two clouds (or a cloud and a noise bank) differ in size."""


class SupportTooLarge(MkvError):
    """Combined LP support exceeds the configured cap."""


class DelayOutOfRange(MkvError):
    """A delay evaluation left the admissible window."""


class BoundViolation(MkvError):
    """A declared model bound was violated during an audited evaluation."""


class EmptySlice(MkvError):
    """No cloud atoms match the requested media value."""


class NotConverged(MkvError):
    """Fixed-point iteration hit max_iter; carries the last cloud and trace."""

    def __init__(self, message, cloud=None, trace=None):
        super().__init__(message)
        self.cloud = cloud
        self.trace = trace


class SchemaError(MkvError):
    """Configuration document violates the schema; carries the field path."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class BoundsError(MkvError):
    """Configuration value outside its admissible range."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
