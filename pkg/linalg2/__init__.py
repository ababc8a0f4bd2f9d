"""Specifies the top level functions which provide linalg2 package access"""
from .errors import InvalidInputError, NotPositiveSemidefiniteError
from .kernels import (
    CMat2,
    CVec2,
    IDENTITY,
    SIGMA_Z,
    adjoint,
    as_cmat2,
    as_cvec2,
    axis_singular_values,
    chol2,
    is_unitary,
    svd2,
    unit_quadrature_noise,
)
