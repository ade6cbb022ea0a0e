"""Exception hierarchy shared by all modules."""


class GuessingGameError(Exception):
    """Base class for errors raised by this package."""


class DomainError(GuessingGameError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class DimensionError(GuessingGameError, ValueError):
    """Array or profile lengths do not agree."""


class UnsupportedError(GuessingGameError, TypeError):
    """The operation is not available for this representation or game."""


class ConvergenceError(GuessingGameError, RuntimeError):
    """A root finder or iteration failed to reach its target.

    ``diagnostics`` carries whatever the failing routine knew at the time
    (brackets, residual samples) so callers can report it.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
