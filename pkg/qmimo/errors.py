"""Exceptions raised by the trusted-noise correction"""


class DegenerateInputError(ValueError):
    """Raised when the effective matrix is zero, so no normalization exists"""
