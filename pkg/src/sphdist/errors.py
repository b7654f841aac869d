"""Exception hierarchy shared by every module.

Errors fall in two families so the CLI can map them onto exit codes:
``InputError`` for malformed or out-of-range input, ``InvariantViolation``
for a mathematical identity that failed to hold.
"""


class SphdistError(Exception):
    """Base class for all package errors."""


class InputError(SphdistError, ValueError):
    pass


class InvariantViolation(SphdistError, AssertionError):
    pass


class ZeroDenominator(InputError, ZeroDivisionError):
    pass


class FieldMismatch(InputError):
    pass


class ParseError(InputError):
    pass


class DegenerateValue(InputError):
    pass


class RangeError(InputError):
    pass


class NonUnitNorm(InputError):
    pass


class NotSymmetric(InputError):
    pass


class SizeLimitExceeded(InputError):
    pass


class PreconditionViolated(InputError):
    pass


class NotADesign(InputError):
    pass


class StrengthTooLow(InputError):
    pass


class EmptySection(InputError):
    pass


class InconsistentNorm(InputError):
    pass


class NotAScheme(InputError):
    def __init__(self, axiom, witness, message=""):
        self.axiom = axiom
        self.witness = witness
        super().__init__(message or f"axiom {axiom} fails at {witness}")


class NonRationalSpectrum(InputError):
    def __init__(self, factor_degrees, message=""):
        self.factor_degrees = list(factor_degrees)
        super().__init__(
            message or f"Bose-Mesner algebra does not split over Q (factor degrees {self.factor_degrees})"
        )


class NotQPolynomial(InputError):
    pass


class RepeatedRows(InputError):
    pass


class NonConstantDiagonal(InputError):
    pass


class NegativeKrein(InvariantViolation):
    pass


class ConstructionInvariantViolated(InvariantViolation):
    pass


class DivisionByZero(InputError, ZeroDivisionError):
    pass
