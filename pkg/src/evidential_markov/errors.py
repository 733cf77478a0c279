"""Exception hierarchy shared by all modules."""


class EMError(Exception):
    """Base class for every error raised by this package."""


# evidence ---------------------------------------------------------------

class EvidenceError(EMError, ValueError):
    pass


class EmptyFocalSet(EvidenceError):
    pass


class UnknownLabel(EvidenceError):
    pass


class DuplicateFocalSet(EvidenceError):
    pass


class InvalidMass(EvidenceError):
    """A mass outside [0, 1] or not finite."""


class MassSumViolation(EvidenceError):
    pass


# dynamics ---------------------------------------------------------------

class DynamicsError(EMError, ValueError):
    pass


class NonFiniteEntry(DynamicsError):
    pass


class DimensionMismatch(DynamicsError):
    pass


class InvalidRate(DynamicsError):
    pass


class InvalidGenerator(DynamicsError):
    """Off-diagonal rates negative, or columns not summing to zero in generator mode."""


# model ------------------------------------------------------------------

class ModelError(EMError, ValueError):
    pass


class OutOfRange(ModelError):
    pass


class ZeroBlockMass(ModelError):
    pass


class ZeroDenominator(ModelError):
    pass


class ProbabilityOverflow(ModelError):
    """The D-alone attack probability exceeded 1."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


# calibration ------------------------------------------------------------

class NoConvergence(EMError):
    """Raised when no multi-start reached an acceptable objective.

    The best point found is kept on ``best`` so callers can still report it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class InvalidTarget(EMError, ValueError):
    pass


# data ingestion ---------------------------------------------------------

class ParseError(EMError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.line = line
        self.column = column


class InvariantViolation(EMError, ValueError):
    def __init__(self, message, record=None):
        super().__init__(message)
        self.record = record
