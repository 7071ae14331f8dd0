"""Exception types raised by the library."""


class ValidationError(ValueError):
    """Input data violates a structural invariant.

    ``field`` names the offending field so the CLI can report it.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class NotUnit(ValidationError):
    pass


class NotOrthogonal(ValidationError):
    pass


class NoConvergence(RuntimeError):
    pass


class BasisExpansionFailed(RuntimeError):
    pass
