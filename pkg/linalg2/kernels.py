"""Exact 2x2 complex kernels: validated conversion, SVD with a fixed gauge, Hermitian Cholesky"""

# External imports
import typing
import numpy

# Local imports
from .errors import InvalidInputError, NotPositiveSemidefiniteError

# A 2x2 complex matrix, or a stack of them with shape (..., 2, 2)
CMat2 = numpy.ndarray
# A dual-polarization complex amplitude, or a stack with shape (..., 2)
CVec2 = numpy.ndarray

# Module level constants
IDENTITY: CMat2 = numpy.eye(2, dtype=complex)
SIGMA_Z: CMat2 = numpy.diag([1.0, -1.0]).astype(complex)
HERMITIAN_TOLERANCE = 1e-12
PSD_REJECT_TOLERANCE = 1e-9
PIVOT_FLOOR = 1e-10
PHASE_FLOOR = 1e-12


def as_cmat2(matrix: typing.Any) -> CMat2:
    """
    Converts an array-like into a complex 2x2 matrix (or stack), rejecting bad input
    :param matrix: Anything numpy can read as a (..., 2, 2) array
    :return: A complex128 array of shape (..., 2, 2)
    """
    converted = numpy.asarray(matrix, dtype=complex)
    if converted.ndim < 2 or converted.shape[-2:] != (2, 2):
        raise InvalidInputError(f"Expected a (..., 2, 2) matrix, got shape {converted.shape}")
    if not numpy.all(numpy.isfinite(converted)):
        raise InvalidInputError("Matrix holds non-finite entries")
    return converted


def as_cvec2(vector: typing.Any) -> CVec2:
    """
    Converts an array-like into a dual-polarization complex vector (or stack)
    :param vector: Anything numpy can read as a (..., 2) array
    :return: A complex128 array of shape (..., 2)
    """
    converted = numpy.asarray(vector, dtype=complex)
    if converted.ndim < 1 or converted.shape[-1] != 2:
        raise InvalidInputError(f"Expected a (..., 2) vector, got shape {converted.shape}")
    if not numpy.all(numpy.isfinite(converted)):
        raise InvalidInputError("Vector holds non-finite entries")
    return converted


def adjoint(matrix: CMat2) -> CMat2:
    """Conjugate transpose over the last two axes"""
    return numpy.conj(numpy.swapaxes(matrix, -1, -2))


def is_unitary(matrix: CMat2, tol: float = 1e-12) -> bool:
    """
    Tests M M† = I in Frobenius norm
    :param matrix: The 2x2 matrix to test
    :param tol: Largest accepted Frobenius residual
    :return: True where the residual is below tol
    """
    residual = as_cmat2(matrix) @ adjoint(matrix) - IDENTITY
    return bool(numpy.linalg.norm(residual) < tol)


def svd2(matrix: CMat2) -> typing.Tuple[CMat2, numpy.ndarray, CMat2]:
    """
    Singular value decomposition M = U diag(sigma) V with a reproducible gauge
    The phase of each left singular vector is chosen so that its first nonzero element is real
    and positive; the opposite phase is pushed into the matching row of V.
    :param matrix: A 2x2 complex matrix or a stack of them
    :return: U, singular values in descending order, V
    """
    matrix = as_cmat2(matrix)
    left, sigma, right = numpy.linalg.svd(matrix)
    leading = numpy.where(
        numpy.abs(left[..., 0, :]) > PHASE_FLOOR, left[..., 0, :], left[..., 1, :]
    )
    phase = leading / numpy.abs(leading)
    left = left * numpy.conj(phase)[..., numpy.newaxis, :]
    right = right * phase[..., :, numpy.newaxis]
    return left, sigma, right


def axis_singular_values(
    left: CMat2, sigma: numpy.ndarray
) -> typing.Tuple[numpy.ndarray, numpy.ndarray]:
    """
    Assigns each singular value to the output polarization its left singular vector leans on
    :param left: U from svd2, single or stacked
    :param sigma: Descending singular values from svd2
    :return: (omega_x, omega_y)
    """
    first_on_x = numpy.abs(left[..., 0, 0]) >= numpy.abs(left[..., 1, 0])
    omega_x = numpy.where(first_on_x, sigma[..., 0], sigma[..., 1])
    omega_y = numpy.where(first_on_x, sigma[..., 1], sigma[..., 0])
    return omega_x, omega_y


def chol2(covariance: CMat2) -> CMat2:
    """
    Lower-triangular L with L L† = C for a Hermitian positive semidefinite 2x2 C
    Eigenvalues marginally below zero are treated as zero. A vanishing first pivot zeroes the
    first column below the diagonal.
    :param covariance: Hermitian 2x2 matrix
    :return: L with a nonnegative real diagonal
    """
    covariance = as_cmat2(covariance)
    if covariance.shape != (2, 2):
        raise InvalidInputError(f"chol2 takes a single matrix, got shape {covariance.shape}")
    if numpy.max(numpy.abs(covariance - adjoint(covariance))) > HERMITIAN_TOLERANCE:
        raise InvalidInputError("Covariance is not Hermitian")
    lowest = numpy.linalg.eigvalsh(covariance)[0]
    if lowest < -PSD_REJECT_TOLERANCE:
        raise NotPositiveSemidefiniteError(
            f"Covariance has eigenvalue {lowest:.3e}, below -{PSD_REJECT_TOLERANCE}"
        )

    pivot = numpy.sqrt(max(covariance[0, 0].real, 0.0))
    if pivot > PIVOT_FLOOR:
        coupling = covariance[1, 0] / pivot
    else:
        pivot, coupling = 0.0, 0.0
    tail = numpy.sqrt(max(covariance[1, 1].real - abs(coupling) ** 2, 0.0))
    return numpy.array([[pivot, 0.0], [coupling, tail]], dtype=complex)


def unit_quadrature_noise(
    rng: numpy.random.Generator, shape: typing.Tuple[int, ...]
) -> numpy.ndarray:
    """
    Circular complex Gaussian noise whose real and imaginary parts are independent N(0, 1)
    :param rng: The generator to draw from, real parts first
    :param shape: Output shape
    :return: Complex array of the requested shape
    """
    real = rng.standard_normal(shape)
    return real + 1j * rng.standard_normal(shape)
