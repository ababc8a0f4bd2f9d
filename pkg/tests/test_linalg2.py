"""Tests for the 2x2 kernels"""

# External imports
import numpy
import numpy.testing
import pytest

# Local imports
from conftest import random_cmat2
from linalg2 import (
    IDENTITY,
    InvalidInputError,
    NotPositiveSemidefiniteError,
    adjoint,
    axis_singular_values,
    chol2,
    is_unitary,
    svd2,
)


def _characteristic_singular_values(matrix: numpy.ndarray) -> numpy.ndarray:
    """Singular values from the quadratic formula on the characteristic polynomial of M†M"""
    gram = adjoint(matrix) @ matrix
    trace = numpy.real(gram[..., 0, 0] + gram[..., 1, 1])
    determinant = numpy.real(
        gram[..., 0, 0] * gram[..., 1, 1] - gram[..., 0, 1] * gram[..., 1, 0]
    )
    root = numpy.sqrt(numpy.maximum(trace**2 / 4 - determinant, 0.0))
    upper = trace / 2 + root
    lower = numpy.maximum(determinant / upper, 0.0)
    return numpy.sqrt(numpy.stack([upper, lower], axis=-1))


class TestSvd2:
    """Reconstruction, unitarity and gauge of the 2x2 SVD"""

    def test_identity(self):
        left, sigma, right = svd2(IDENTITY)
        numpy.testing.assert_allclose(sigma, [1.0, 1.0], atol=1e-15)
        numpy.testing.assert_allclose(left @ numpy.diag(sigma) @ right, IDENTITY, atol=1e-15)

    def test_diagonal(self):
        matrix = numpy.diag([0.9, 0.5]).astype(complex)
        left, sigma, right = svd2(matrix)
        numpy.testing.assert_allclose(sigma, [0.9, 0.5], atol=1e-15)
        numpy.testing.assert_allclose(left, IDENTITY, atol=1e-15)
        numpy.testing.assert_allclose(right, IDENTITY, atol=1e-15)

    def test_random_matrices(self, rng):
        matrices = random_cmat2(rng, 1000)
        left, sigma, right = svd2(matrices)
        rebuilt = left @ (sigma[..., :, numpy.newaxis] * right)
        assert numpy.max(numpy.linalg.norm(rebuilt - matrices, axis=(-2, -1))) < 1e-12
        for factor in (left, right):
            residual = factor @ adjoint(factor) - IDENTITY
            assert numpy.max(numpy.linalg.norm(residual, axis=(-2, -1))) < 1e-12
        assert numpy.all(sigma[:, 0] >= sigma[:, 1])
        assert numpy.all(sigma[:, 1] >= 0.0)
        numpy.testing.assert_allclose(
            sigma, _characteristic_singular_values(matrices), atol=1e-10
        )

    def test_gauge_first_element_real_positive(self, rng):
        left, _, _ = svd2(random_cmat2(rng, 200))
        numpy.testing.assert_allclose(numpy.imag(left[:, 0, :]), 0.0, atol=1e-14)
        assert numpy.all(numpy.real(left[:, 0, :]) > 0.0)

    def test_unitary_has_unit_singular_values(self, rng):
        unitaries, _, _ = svd2(random_cmat2(rng, 100))
        _, sigma, _ = svd2(unitaries)
        numpy.testing.assert_allclose(sigma, 1.0, atol=1e-12)

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidInputError):
            svd2(numpy.array([[numpy.nan, 0], [0, 1]]))
        with pytest.raises(InvalidInputError):
            svd2(numpy.ones(3))


class TestChol2:
    """Hermitian Cholesky with clamping and the zero-pivot convention"""

    def test_identity(self):
        numpy.testing.assert_allclose(chol2(IDENTITY), IDENTITY)

    def test_diagonal(self):
        numpy.testing.assert_allclose(chol2(numpy.diag([4.0, 1.0])), numpy.diag([2.0, 1.0]))

    def test_correlated(self):
        covariance = numpy.array([[1.0, 0.5], [0.5, 1.0]], dtype=complex)
        factor = chol2(covariance)
        numpy.testing.assert_allclose(factor, [[1.0, 0.0], [0.5, numpy.sqrt(0.75)]])
        numpy.testing.assert_allclose(factor @ adjoint(factor), covariance, atol=1e-12)

    def test_recovers_random_factor(self, rng):
        for _ in range(200):
            factor = numpy.zeros((2, 2), dtype=complex)
            factor[0, 0], factor[1, 1] = rng.uniform(0.1, 2.0, size=2)
            factor[1, 0] = complex(*rng.normal(size=2))
            numpy.testing.assert_allclose(chol2(factor @ adjoint(factor)), factor, atol=1e-10)

    def test_zero_pivot(self):
        factor = chol2(numpy.diag([0.0, 0.75]))
        numpy.testing.assert_allclose(factor, numpy.diag([0.0, numpy.sqrt(0.75)]))

    def test_tiny_negative_clamped(self):
        factor = chol2(numpy.diag([-1e-13, 1.0]))
        numpy.testing.assert_allclose(factor, numpy.diag([0.0, 1.0]))

    def test_negative_rejected(self):
        with pytest.raises(NotPositiveSemidefiniteError):
            chol2(numpy.diag([-1e-3, 1.0]))

    def test_non_hermitian_rejected(self):
        with pytest.raises(InvalidInputError):
            chol2(numpy.array([[1.0, 0.5], [0.2, 1.0]]))


class TestHelpers:
    """Unitarity predicate and polarization assignment of singular values"""

    def test_is_unitary(self):
        assert is_unitary(numpy.array([[0, -1], [1, 0]]))
        assert not is_unitary(numpy.diag([1.0, 0.5]))
        assert is_unitary(numpy.diag([1.0, 1.0 + 1e-6]), tol=1e-5)

    def test_axis_assignment_follows_left_vectors(self):
        swap = numpy.array([[0, 1], [1, 0]], dtype=complex)
        left, sigma, _ = svd2(swap @ numpy.diag([2.0, 1.0]))
        omega_x, omega_y = axis_singular_values(left, sigma)
        assert omega_x == pytest.approx(1.0)
        assert omega_y == pytest.approx(2.0)
