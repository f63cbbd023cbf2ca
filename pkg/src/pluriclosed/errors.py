"""Exception hierarchy shared by all modules."""


class PluriclosedError(Exception):
    """Base class for all library errors."""


class ParseError(PluriclosedError):
    """Malformed input document; ``path`` names the offending field."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class MetricError(PluriclosedError):
    """Rejected Hermitian coefficient matrix (not Hermitian / not positive definite)."""


class PreconditionError(PluriclosedError):
    """An operation was called outside its stated domain.

    ``violations`` maps condition names to the residuals that broke them.
    """

    def __init__(self, message: str, violations: dict | None = None):
        self.violations = dict(violations or {})
        super().__init__(message)


class CrossCheckError(PluriclosedError):
    """Two independent computation routes disagreed beyond tolerance.

    This signals a numerical-threshold failure, never a mathematical one.
    """
