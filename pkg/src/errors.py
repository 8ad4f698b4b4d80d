"""Exception hierarchy for divsmooth."""


class DivSmoothError(Exception):
    """Base class for all divsmooth errors."""


class DomainError(DivSmoothError):
    """Invalid mathematical input or parameter regime."""


class InputError(DivSmoothError):
    """Malformed command-line or file input."""


class EmptyVector(DomainError):
    pass


class NegativeEntry(DomainError):
    pass


class NotNormalized(DomainError):
    pass


class IndexOutOfRange(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class UndefinedArithmetic(DomainError):
    """Raised for inf - inf."""


class InvalidReference(DomainError):
    """A reference vector cannot be written as a rational reference."""


class NotSorted(DomainError):
    pass


class InfeasibleClip(DomainError):
    """Clip levels are inconsistent (a < b) while the ball excludes the reference."""


class GammaOutOfRange(DomainError):
    pass


class UnsupportedOrder(DomainError):
    pass


class InvalidQuery(DomainError):
    pass


class OutOfRegime(DomainError):
    pass


class OracleScaleExceeded(DomainError):
    pass


class NotSortedForThisD(DomainError):
    pass


class ConstraintViolated(DomainError):
    pass


class DomainViolated(DomainError):
    pass


class InsideBall(DomainError):
    """The reference vector lies inside the epsilon ball."""


class Infeasible(DomainError):
    pass
