class GapbenchError(Exception):
    """Base class for all library errors."""


class GraphFormatError(GapbenchError, ValueError):
    """Malformed edge-list input. ``line`` is 1-based, or None when not tied to a line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"{message}, line {line}"
        super().__init__(message)


class DenseThresholdError(GapbenchError, ValueError):
    pass


class ConvergenceError(GapbenchError, RuntimeError):
    """Raised when an iterative method hits its cap; ``result`` holds the best estimate."""

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class ConvergenceWarning(UserWarning):
    pass
