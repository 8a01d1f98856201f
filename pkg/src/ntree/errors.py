"""Exception hierarchy shared by all modules.

Every domain error carries an optional ``stage`` string describing the
coordinates (shift history / polynomial) where it was raised, so the CLI can
report where the Newton process broke down.
"""


class NTreeError(Exception):
    """Base class for domain errors (CLI exit code 2)."""

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage

    @property
    def name(self):
        return type(self).__name__

    def __str__(self):
        msg = super().__str__()
        if self.stage:
            return f"{msg} [stage: {self.stage}]"
        return msg


class ParseError(NTreeError):
    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} at position {position}")
        self.position = position


class DimensionMismatch(NTreeError):
    pass


class NotRegular(NTreeError):
    pass


class NuStatusMany(NTreeError):
    pass


class NonRationalRoots(NTreeError):
    def __init__(self, message, residual=None, stage=None):
        super().__init__(message, stage)
        self.residual = residual


class EliminationBudgetExceeded(NTreeError):
    pass


class MaxDepthExceeded(NTreeError):
    pass


class NotPGood(NTreeError):
    pass


class BlackBoxPresent(NTreeError):
    pass


class PreconditionError(NTreeError):
    pass


class NotSeparated(PreconditionError):
    pass


class UnsupportedMultiArrow(NTreeError):
    pass


class InconsistentSections(NTreeError):
    pass


class RetryBudgetExceeded(NTreeError):
    pass


class InternalInconsistency(Exception):
    """A cross-check between two independent computations failed (exit code 3)."""
