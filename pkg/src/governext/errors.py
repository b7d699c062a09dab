"""Exception hierarchy shared by every module of the package."""


class GoverningError(Exception):
    """Base class; ``code`` is the machine-readable name emitted by the CLI."""

    @property
    def code(self):
        return type(self).__name__


class ValidationError(GoverningError, ValueError):
    """Bad user input. The CLI maps these to exit status 2."""


class InvariantFailure(GoverningError, RuntimeError):
    """An internal consistency check failed. The CLI maps these to exit status 3."""


class NonSquarefree(ValidationError):
    pass


class DisallowedD(ValidationError):
    pass


class AmbiguousPlace(ValidationError):
    pass


class NoSuchPlace(ValidationError):
    pass


class MalformedToken(ValidationError):
    pass


class ZeroElement(ValidationError):
    pass


class FieldMismatch(ValidationError):
    pass


class DiscriminantTooLarge(ValidationError):
    pass


class WildPlace(ValidationError):
    pass


class DeltaZero(ValidationError):
    pass


class WrongPrimeForReal(ValidationError):
    pass


class ArchimedeanRequiresP2(WrongPrimeForReal):
    pass


class NonUnitValuation(ValidationError):
    pass


class DuplicatePlace(ValidationError):
    pass


class BasisNotCoprime(ValidationError):
    pass


class SetTooLarge(ValidationError):
    pass


class NotRationalBase(ValidationError):
    pass


class BadCongruence(ValidationError):
    pass


class NonCoprimeModulus(ValidationError):
    pass


class AvoidanceFailure(InvariantFailure):
    pass


class DimensionMismatch(InvariantFailure):
    pass


class LedgerMismatch(InvariantFailure):
    pass
