"""Exception hierarchy. Every error carries a short machine-readable ``token``."""


class FFError(Exception):
    token = "Error"

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        cls.token = cls.__name__


class NoInverse(FFError, ZeroDivisionError):
    pass


class ShapeError(FFError, ValueError):
    pass


class SingularMatrix(FFError, ValueError):
    pass


class FieldMismatch(FFError, ValueError):
    pass


class NotPrime(FFError, ValueError):
    pass


class NotAdmissible(FFError, ValueError):
    pass


class GenerationExhausted(FFError, RuntimeError):
    pass


class ImpossibleConfig(FFError, ValueError):
    pass


class BudgetExceeded(FFError, RuntimeError):
    pass


class NotStabilizable(FFError, ValueError):
    pass


class MissingGain(FFError, ValueError):
    pass


class BadGain(FFError, ValueError):
    pass


class Unsupported(FFError, NotImplementedError):
    pass


class ParseError(FFError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
