"""Exception hierarchy shared by all modules."""


class ToposError(Exception):
    """Base class for every error raised by this package."""


class PresentationOverflow(ToposError):
    """Closing a site presentation under composition exceeded the bound."""


class PreconditionError(ToposError):
    """An operation was called on inputs violating its stated precondition."""


class ShapeMismatch(ToposError):
    """Arrows or objects do not have the shapes an operation requires."""


class BudgetExceeded(ToposError):
    """An enumeration exceeded the configured expansion budget.

    Carries enough context to name the offending stage in reports.
    """

    def __init__(self, message, *, context=None):
        super().__init__(message)
        self.context = context or {}


class HomSetTooLarge(BudgetExceeded):
    """A hom-set enumeration passed the configured cap."""


class CertificationError(ToposError):
    """A certificate required by a precondition is missing or failed."""


class DocumentError(ToposError):
    """A workspace document failed to parse or validate.

    ``line`` is 1-based; 0 means the error is not tied to a single line.
    """

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line
        self.message = message


class InternalCheckFailure(ToposError):
    """A condition that is a theorem failed; indicates a bug, not bad input."""
