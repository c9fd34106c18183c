"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`DynamicsError`;
the CLI prints ``type(err).__name__`` verbatim and exits with status 1.
"""


class DynamicsError(Exception):
    """Base class for domain errors."""


# scalars
class DivisionByZero(DynamicsError, ZeroDivisionError):
    pass


class ConductorTooLarge(DynamicsError):
    pass


class NoCyclotomicRoot(DynamicsError):
    """A requested k-th root does not lie in a supported cyclotomic field."""


# series
class WindowTooSmall(DynamicsError):
    pass


class NotInvertible(DynamicsError):
    pass


class ZeroSeries(DynamicsError):
    pass


# conjugacy
class LeadingRootUnavailable(DynamicsError):
    pass


class InvalidTwist(DynamicsError):
    pass


class WitnessNotRepresentable(DynamicsError):
    def __init__(self, message, kind=None):
        super().__init__(message)
        self.kind = kind


class SupportViolation(DynamicsError):
    pass


class FunctionalEquationViolation(DynamicsError):
    pass


# dependence
class WindowInsufficient(DynamicsError):
    pass


class TwistNotFound(DynamicsError):
    pass


class ZeroRelation(DynamicsError):
    pass


class InvalidWitness(DynamicsError):
    pass


class VerificationFailed(DynamicsError):
    """A relation certificate whose residual does not vanish."""


# heights
class MaxIterationsExceeded(DynamicsError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class RadiusTooSmall(DynamicsError):
    pass


class DenominatorNotSeparated(DynamicsError):
    pass


# parsing
class ParseError(DynamicsError, ValueError):
    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)
