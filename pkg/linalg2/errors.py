"""Exceptions raised by the small-matrix kernels"""


class InvalidInputError(ValueError):
    """Raised when a matrix or vector is malformed or holds non-finite entries"""


class NotPositiveSemidefiniteError(ValueError):
    """Raised when a covariance handed to chol2 has a clearly negative eigenvalue"""
