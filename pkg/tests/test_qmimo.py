"""Tests for the Q-MIMO trusted-noise correction"""

# External imports
import numpy
import numpy.testing
import pytest

# Local imports
from conftest import random_cmat2
from channel import rotation
from linalg2 import IDENTITY, adjoint, svd2, unit_quadrature_noise
from qmimo import (
    DegenerateInputError,
    apply_cmimo,
    completion_residual,
    correction_audit_frame,
    normalize_w,
    qmimo_apply,
    sample_trusted_noise,
    svd_noise_path,
)


class TestNormalize:
    """Normalization and the vacuum completion"""

    def test_unitary_needs_no_noise(self):
        unitary = rotation(0.3) @ numpy.diag([1.0, numpy.exp(0.2j)])
        nc = normalize_w(unitary)
        numpy.testing.assert_allclose(nc.w0, unitary, atol=1e-12)
        assert nc.omega_max == pytest.approx(1.0)
        numpy.testing.assert_allclose(nc.c_add, 0.0, atol=1e-12)

    def test_diagonal(self):
        nc = normalize_w(numpy.diag([2.0, 1.0]))
        numpy.testing.assert_allclose(nc.w0, numpy.diag([1.0, 0.5]))
        assert nc.omega_max == pytest.approx(2.0)
        assert nc.omega == pytest.approx((1.0, 0.5))
        numpy.testing.assert_allclose(nc.c_add, numpy.diag([0.0, 0.75]), atol=1e-15)
        assert nc.omega_gap == pytest.approx(0.5)

    def test_zero_matrix_rejected(self):
        with pytest.raises(DegenerateInputError):
            normalize_w(numpy.zeros((2, 2)))

    def test_identity_completion(self, rng):
        for matrix in random_cmat2(rng, 10**4):
            nc = normalize_w(matrix)
            assert completion_residual(nc) < 1e-12
            numpy.testing.assert_allclose(nc.c_add, IDENTITY - nc.w0 @ adjoint(nc.w0), atol=1e-12)
            numpy.testing.assert_allclose(nc.l_add @ adjoint(nc.l_add), nc.c_add, atol=1e-10)
            assert svd2(nc.w0)[1][0] == pytest.approx(1.0, abs=1e-10)
            assert max(nc.omega) <= 1 + 1e-10
            assert min(nc.omega) >= 0.0

    def test_scale_invariance(self, rng):
        for matrix, scale in zip(random_cmat2(rng, 100), rng.uniform(1e-3, 1e3, size=100)):
            numpy.testing.assert_allclose(
                normalize_w(scale * matrix).w0, normalize_w(matrix).w0, atol=1e-12
            )

    def test_unit_norm_row_gives_zero_pivot(self):
        nc = normalize_w(numpy.array([[1.0, 0.0], [0.0, 0.3]]))
        assert nc.v_xx == pytest.approx(0.0, abs=1e-15)
        numpy.testing.assert_allclose(nc.l_add[:, 0], 0.0)
        assert nc.l_add[1, 1].real == pytest.approx(numpy.sqrt(0.91))


class TestTrustedNoise:
    """Sampling and application"""

    def test_no_noise_for_unitary(self, rng):
        nc = normalize_w(rotation(1.0))
        numpy.testing.assert_allclose(sample_trusted_noise(nc, rng, 1000), 0.0, atol=1e-12)

    def test_diagonal_variances(self, rng):
        noise = sample_trusted_noise(normalize_w(numpy.diag([2.0, 1.0])), rng, 10**6)
        numpy.testing.assert_array_equal(noise[:, 0], 0.0)
        assert numpy.var(noise[:, 1].real) == pytest.approx(0.75, abs=0.01)
        assert numpy.var(noise[:, 1].imag) == pytest.approx(0.75, abs=0.01)

    def test_empirical_covariance(self, rng):
        nc = normalize_w(random_cmat2(rng, 1)[0])
        noise = sample_trusted_noise(nc, rng, 10**6)
        empirical = noise.T @ noise.conj() / (2 * len(noise))
        numpy.testing.assert_allclose(empirical, nc.c_add, atol=0.01)

    def test_single_draw_shape(self, rng):
        assert sample_trusted_noise(normalize_w(IDENTITY), rng).shape == (2,)

    def test_unitary_matches_cmimo(self, rng):
        nc = normalize_w(3.0 * rotation(0.4))
        symbols = rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2))
        numpy.testing.assert_allclose(qmimo_apply(nc, symbols, rng), apply_cmimo(nc, symbols))
        numpy.testing.assert_allclose(apply_cmimo(nc, symbols), symbols @ rotation(0.4).T)

    def test_restores_shot_noise_unit(self, rng):
        w_eff = 1.7 * rotation(0.6) @ numpy.diag([1.0, 10 ** (-0.15)]) @ rotation(-0.2)
        nc = normalize_w(w_eff)
        vacuum = unit_quadrature_noise(rng, (10**6, 2))
        output = qmimo_apply(nc, vacuum, rng)
        for quadrature in (output.real, output.imag):
            numpy.testing.assert_allclose(numpy.var(quadrature, axis=0), 1.0, atol=0.01)
        cmimo = apply_cmimo(nc, vacuum)
        assert numpy.var(cmimo[:, 1].real) < 0.9


class TestSvdPath:
    """Equivalence with the singular value factorization"""

    def test_identity(self, rng):
        noise = rng.normal(size=2) + 1j * rng.normal(size=2)
        numpy.testing.assert_allclose(svd_noise_path(IDENTITY, noise, numpy.zeros(2)), noise)

    def test_dump_port(self):
        output = svd_noise_path(numpy.diag([1.0, 0.5]), numpy.zeros(2), numpy.ones(2))
        numpy.testing.assert_allclose(output, [0.0, numpy.sqrt(0.75)])

    def test_covariance_propagation(self, rng):
        basis = numpy.eye(2, dtype=complex)
        zeros = numpy.zeros((2, 2), dtype=complex)
        for matrix in random_cmat2(rng, 200):
            nc = normalize_w(matrix)
            # rows of the basis stack map to columns of the linear maps
            through_w0 = svd_noise_path(nc, basis, zeros).T
            through_dump = svd_noise_path(nc, zeros, basis).T
            numpy.testing.assert_allclose(through_w0, nc.w0, atol=1e-12)
            numpy.testing.assert_allclose(
                through_dump @ adjoint(through_dump), nc.c_add, atol=1e-12
            )
            total = through_w0 @ adjoint(through_w0) + through_dump @ adjoint(through_dump)
            numpy.testing.assert_allclose(total, IDENTITY, atol=1e-12)


def test_audit_frame():
    corrections = [normalize_w(numpy.diag([2.0, 1.0])), normalize_w(IDENTITY)]
    audit = correction_audit_frame(corrections, frame_indices=[10, 11])
    assert list(audit.columns) == [
        "frame_index", "omega_x", "omega_y", "omega_max", "v_xx", "v_yy", "v_xy_re", "v_xy_im",
    ]  # fmt: skip
    assert audit["frame_index"].tolist() == [10, 11]
    assert audit["omega_max"].tolist() == pytest.approx([2.0, 1.0])
    assert audit["v_yy"].tolist() == pytest.approx([0.75, 0.0], abs=1e-12)
