"""Exception hierarchy. Every error raised by the package derives from SumRankError."""


class SumRankError(Exception):
    pass


class NotPrime(SumRankError, ValueError):
    pass


class TooLarge(SumRankError):
    """An enumeration would exceed a configured guard.

    ``limit`` names the quantity, ``knob`` the setting (flag or environment
    variable) that raises it.
    """

    def __init__(self, message, limit=None, knob=None):
        super().__init__(message)
        self.limit = limit
        self.knob = knob


class InternalIrreducibilityFailure(SumRankError, AssertionError):
    pass


class DivisionByZero(SumRankError, ZeroDivisionError):
    pass


class LengthMismatch(SumRankError, ValueError):
    pass


class ZeroMessage(SumRankError, ValueError):
    pass


class Degenerate(SumRankError, ValueError):
    pass


class InternalDisagreement(SumRankError, AssertionError):
    """Two independent computations of the same quantity disagree (a bug)."""


class HypothesisNotSatisfied(SumRankError, ValueError):
    pass


class ContextMismatch(SumRankError, ValueError):
    pass


class ShapeMismatch(SumRankError, ValueError):
    pass


class BadArgs(SumRankError, ValueError):
    pass


class BadProfiles(SumRankError, ValueError):
    pass


class NotAPartition(SumRankError, ValueError):
    pass


class ClassNotSaturating(SumRankError, ValueError):
    pass


class ConstructionCheckFailed(SumRankError, AssertionError):
    pass


class NotCutting(SumRankError, ValueError):
    pass


class IncompleteTable(SumRankError, ValueError):
    pass


class FormatError(SumRankError, ValueError):
    pass


class BudgetExhausted(SumRankError):
    """Search stopped before finding a witness; ``report`` holds the certified lower bound."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
