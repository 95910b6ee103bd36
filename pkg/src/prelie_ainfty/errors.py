"""Exception hierarchy shared by every module of the package."""


class AlgebraError(Exception):
    """Base class for all errors raised by prelie_ainfty."""


class RingMismatch(AlgebraError):
    pass


class NotInvertible(AlgebraError):
    pass


class ArityOutOfRange(AlgebraError):
    pass


class DegreeMismatch(AlgebraError):
    pass


class NotADifferential(AlgebraError):
    pass


class NotAChainMap(AlgebraError):
    pass


class NonzeroInducedMap(AlgebraError):
    pass


class AssumptionAViolated(AlgebraError):
    pass


class ProjectivityViolated(AssumptionAViolated):
    pass


class EvenWeight(AlgebraError):
    pass


class EvenDegree(AlgebraError):
    pass


class SourceNotASuspension(AlgebraError):
    pass


class NotAssociative(AlgebraError):
    pass


class NotACocycle(AlgebraError):
    pass


class InvalidArStructure(AlgebraError):
    pass


class RTooSmall(AlgebraError):
    pass


class InternalInvariantError(AlgebraError):
    """A guaranteed identity failed to hold; always a bug, never bad input."""


class ParseError(AlgebraError):
    pass


class ValidationError(AlgebraError):
    def __init__(self, message, location=None):
        super().__init__(message if location is None else f"{location}: {message}")
        self.location = location
