"""Exception hierarchy shared by every kminit module."""


class KMInitError(Exception):
    """Base class for all errors raised by kminit."""


class ParseError(KMInitError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyDataset(KMInitError, ValueError):
    pass


class MissingLabels(KMInitError, ValueError):
    pass


class DimensionError(KMInitError, ValueError):
    pass


class DomainError(KMInitError, ValueError):
    pass


class DegenerateCovariance(KMInitError, ArithmeticError):
    pass


class DegenerateRange(KMInitError, ArithmeticError):
    pass


class DegenerateHistogram(KMInitError, ArithmeticError):
    pass


class TooManyClusters(KMInitError, ValueError):
    pass


class UnsplittableData(KMInitError, ArithmeticError):
    """No node can be divided further before ``k`` leaves exist."""

    def __init__(self, message, leaves=0):
        self.leaves = leaves
        super().__init__(message)


class ReportIOError(KMInitError, OSError):
    pass
