"""Exception types raised by geodmp."""


class GeoDmpError(Exception):
    """Base class for all errors raised by this package."""


class EmptySequence(GeoDmpError, ValueError):
    pass


class NoSamples(GeoDmpError, ValueError):
    pass


class NotConverged(GeoDmpError, RuntimeError):
    """Iterative solver hit its iteration limit.

    The last iterate is kept on ``last`` so callers can still use it.
    """

    def __init__(self, max_iter, last):
        super().__init__(f"no convergence after {max_iter} iterations")
        self.max_iter = max_iter
        self.last = last


class DegenerateDemo(GeoDmpError, ValueError):
    pass


class DegenerateGoal(GeoDmpError, ValueError):
    pass


class EmptyDemoSet(GeoDmpError, ValueError):
    pass


class DegenerateProjection(GeoDmpError, ValueError):
    pass


class InsufficientData(GeoDmpError, ValueError):
    pass


class NoNeighbors(GeoDmpError, LookupError):
    pass


class UnsupportedRegion(GeoDmpError, ValueError):
    pass


class LengthMismatch(GeoDmpError, ValueError):
    pass


class InvalidParams(GeoDmpError, ValueError):
    pass


class InvalidSpeed(GeoDmpError, ValueError):
    pass


class ParseError(GeoDmpError, ValueError):
    def __init__(self, line, column, reason, path=None):
        where = f"{path}:" if path else ""
        super().__init__(f"{where}{line}:{column}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason
        self.path = path


class NonMonotoneTime(GeoDmpError, ValueError):
    def __init__(self, row, path=None):
        where = f"{path}: " if path else ""
        super().__init__(f"{where}timestamps not strictly increasing at row {row}")
        self.row = row
        self.path = path


class BadQuaternionNorm(GeoDmpError, ValueError):
    def __init__(self, row, norm, path=None):
        where = f"{path}: " if path else ""
        super().__init__(f"{where}quaternion norm {norm:.6g} at row {row}")
        self.row = row
        self.path = path
        self.norm = norm
