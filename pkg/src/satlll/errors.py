"""Exception hierarchy shared by all satlll modules."""


class SatLllError(Exception):
    """Base class for all satlll errors."""


class DomainError(SatLllError):
    """A parameter is outside the mathematical domain of an operation."""


class SizeGuardError(SatLllError):
    """A configurable size guard (vertices, clauses, enumeration cap) was exceeded."""


class CertificationError(SatLllError):
    """An interval comparison or floor could not be certified at the working precision.

    Raised instead of silently rounding; callers may retry at higher precision.
    """


class DimacsError(SatLllError):
    """Malformed DIMACS input.  Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
