"""Exception types raised across the package."""


class EcflowError(ValueError):
    """Base class for input and verification errors."""


class EmptyDistribution(EcflowError):
    pass


class NegativeEntry(EcflowError):
    pass


class NotNormalized(EcflowError):
    pass


class LengthMismatch(EcflowError):
    pass


class NegativeInput(EcflowError):
    pass


class TooLarge(EcflowError):
    pass


class TooSmall(EcflowError):
    pass


class OutOfRange(EcflowError):
    pass


class InvalidSeed(EcflowError):
    pass


class DegenerateExtremes(EcflowError):
    """Largest or smallest entry is not strictly unique."""


class NegativeArgument(EcflowError):
    pass


class NegativeDomain(EcflowError):
    pass


class DivisionByZeroInterval(EcflowError):
    pass


class NegativeSqrt(EcflowError):
    pass


class CertificationFailed(EcflowError):
    """A sign or uniqueness condition could not be verified rigorously."""
