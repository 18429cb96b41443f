"""Exception hierarchy shared by every dirlab module."""


class DirlabError(Exception):
    """Base class for all errors raised by dirlab."""


class FieldError(DirlabError, ValueError):
    pass


class NonPrimeCharacteristic(FieldError):
    pass


class ReducibleModulus(FieldError):
    pass


class DegreeMismatch(FieldError):
    pass


class FieldTooLarge(FieldError):
    pass


class JOutOfRange(FieldError):
    pass


class IndexDoesNotDivide(FieldError):
    pass


class DivisionByZero(DirlabError, ZeroDivisionError):
    pass


class ContextMismatch(DirlabError, ValueError):
    pass


class EmptySet(DirlabError, ValueError):
    pass


class TooFewPoints(DirlabError, ValueError):
    pass


class DuplicatePoint(DirlabError, ValueError):
    pass


class NonzeroAtOrigin(DirlabError, ValueError):
    pass


class ZeroValueAtNonzeroPoint(DirlabError, ValueError):
    pass


class FieldTooLargeForExhaustion(DirlabError, ValueError):
    pass


class UnrepresentableInFormat(DirlabError, ValueError):
    pass


class UsageError(DirlabError, ValueError):
    pass
