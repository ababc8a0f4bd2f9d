"""Exceptions raised by the key-rate calculator"""


class NumericalDomainError(ArithmeticError):
    """Raised when the parameters leave the domain where the entropy formulas are defined"""


class InvalidSplitError(ValueError):
    """Raised when the key block is not strictly smaller than the total block"""
