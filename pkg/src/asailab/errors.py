"""Exception hierarchy shared by every layer of asailab."""


class AsaiError(Exception):
    """Base class; carries an optional ``obj`` naming the offending object."""

    def __init__(self, message, obj=None):
        super().__init__(message)
        self.obj = obj

    def __str__(self):
        msg = super().__str__()
        return f"{self.obj}: {msg}" if self.obj else msg


class IsSquare(AsaiError):
    pass


class PrecisionExhausted(AsaiError):
    pass


class DivisionByZero(AsaiError, ZeroDivisionError):
    pass


class NotInTower(AsaiError):
    pass


class BudgetExceeded(AsaiError):
    def __init__(self, message, cardinality=None, obj=None):
        super().__init__(message, obj)
        self.cardinality = cardinality


class WrongClass(AsaiError):
    pass


class FieldMismatch(AsaiError):
    pass


class Inadmissible(AsaiError):
    pass


class SpecError(AsaiError):
    """Malformed run specification (carries a location string)."""
