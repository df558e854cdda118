"""Exception hierarchy shared by all modules."""


class LeibnizError(Exception):
    """Base class for every error raised by the toolkit."""


class DivisionByZero(LeibnizError, ZeroDivisionError):
    pass


class ArityError(LeibnizError, ValueError):
    pass


class ShapeError(LeibnizError, ValueError):
    pass


class ZeroPolynomial(LeibnizError, ValueError):
    pass


class NonSplitSpectrum(LeibnizError):
    """Characteristic polynomial has irreducible factors of degree > 1 over Q.

    ``remainder`` holds the unfactored part.
    """

    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


class IdentityViolation(LeibnizError):
    """A multiplication table does not satisfy the Leibniz identity."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotADerivation(LeibnizError):
    pass


class NotNilpotent(LeibnizError):
    pass


class NotAnIdeal(LeibnizError):
    pass


class OrderOutOfRange(LeibnizError, ValueError):
    pass


class CorpusFormatError(LeibnizError):
    """Malformed algebra file. ``location`` names the offending field."""

    def __init__(self, message, location=None):
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location
