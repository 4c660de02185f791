"""Exception hierarchy shared by all modules."""


class SqzCombError(Exception):
    """Base class for errors raised by sqzcomb."""


class DomainError(SqzCombError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class NotModeledError(SqzCombError, ValueError):
    """A configuration asks for physics the analytic model does not cover."""


class OutOfRegimeError(SqzCombError, ValueError):
    """The weak-dispersion approximation is violated beyond its hard limit."""


class InconsistentTraceError(SqzCombError, ValueError):
    """A phase-sweep trace cannot be explained by the quadrature model."""


class HitranError(SqzCombError, ValueError):
    """Base class for line-list parsing problems."""


class HitranFormatError(HitranError):
    """A record has the wrong shape (length, encoding)."""

    def __init__(self, message: str, length: int | None = None):
        super().__init__(message)
        self.length = length


class HitranFieldError(HitranError):
    """A fixed-width field could not be converted or holds an invalid value."""

    def __init__(self, message: str, field: str, span: tuple[int, int], text: str):
        super().__init__(message)
        self.field = field
        self.span = span
        self.text = text
