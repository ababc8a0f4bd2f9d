"""Exceptions raised by the channel parameter estimators"""


class UndefinedEstimateError(ValueError):
    """Raised when the data cannot define an estimate, e.g. Alice sent no power"""


class InsufficientDataError(ValueError):
    """Raised when a block is below the statistical floor of the estimators"""


class ConsistencyError(ValueError):
    """Raised when an assembled covariance violates the uncertainty principle"""
