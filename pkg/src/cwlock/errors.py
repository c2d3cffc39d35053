class CwlockError(Exception):
    """Base class for errors raised by this package."""


class ArithmeticOverflowError(CwlockError, OverflowError):
    """A checked integer operation left the 64-bit range."""


class DomainError(CwlockError, ValueError):
    """An argument lies outside the domain of the function."""


class OutOfRangeError(CwlockError, ValueError):
    """An index is too large to be represented."""


class NotFoundWithinCapError(CwlockError):
    """The brute-force BFS exhausted its depth cap."""


class CapExceededError(CwlockError):
    """A scan reached its index cap before finding every target denominator."""

    def __init__(self, missing, high_water):
        self.missing = list(missing)
        self.high_water = high_water
        shown = ", ".join(map(str, self.missing[:20]))
        if len(self.missing) > 20:
            shown += f", ... ({len(self.missing)} total)"
        super().__init__(
            f"index cap reached at {high_water} with denominators still missing: {shown}"
        )


class MalformedTableError(CwlockError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TableCoverageError(CwlockError, KeyError):
    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__(f"pi-table does not cover denominators {self.missing}")

    def __str__(self):
        return self.args[0]
