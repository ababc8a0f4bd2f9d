"""Trusted-noise correction: normalize the effective matrix and complete it to a beam splitter"""

# External imports
import dataclasses
import logging
import typing
import numpy

# Local imports
from linalg2 import (
    CMat2,
    CVec2,
    IDENTITY,
    as_cmat2,
    as_cvec2,
    axis_singular_values,
    chol2,
    svd2,
    unit_quadrature_noise,
)
from .errors import DegenerateInputError

logger = logging.getLogger(__name__)

# Module level constants
ZERO_MATRIX_FLOOR = 1e-300
# Entries of C_add this small are rounding residue of a unit-norm row
ROUNDING_FLOOR = 1e-14


@dataclasses.dataclass(frozen=True)
class NoiseCorrection:
    """
    Normalized effective matrix W0 = W_eff / omega_max with the covariance of the vacuum that
    completes it to a passive coupler, C_add = I - W0 W0†, and a Cholesky factor of C_add
    """

    w0: CMat2
    omega: typing.Tuple[float, float]
    omega_max: float
    c_add: CMat2
    l_add: CMat2

    @property
    def v_xx(self) -> float:
        """Added noise variance on the X output"""
        return float(self.c_add[0, 0].real)

    @property
    def v_yy(self) -> float:
        """Added noise variance on the Y output"""
        return float(self.c_add[1, 1].real)

    @property
    def v_xy(self) -> complex:
        """Added noise correlation between the X and Y outputs"""
        return complex(self.c_add[0, 1])

    @property
    def omega_gap(self) -> float:
        """Distance between the two normalized singular values"""
        return abs(self.omega[0] - self.omega[1])


def normalize_w(w_eff: CMat2) -> NoiseCorrection:
    """
    Divides W_eff by its largest singular value and derives the trusted vacuum to add
    :param w_eff: Effective matrix, laid out as [[w_XX, w_YX], [w_XY, w_YY]]
    :return: The correction for the frame this matrix was frozen for
    """
    w_eff = as_cmat2(w_eff)
    left, sigma, _ = svd2(w_eff)
    omega_max = float(sigma[0])
    if omega_max < ZERO_MATRIX_FLOOR:
        raise DegenerateInputError("Effective matrix is zero; there is no signal to normalize")
    logger.debug("Normalizing effective matrix with omega_max %.6f", omega_max)

    w0 = w_eff / omega_max
    omega_x, omega_y = axis_singular_values(left, sigma / omega_max)
    v_xx = 1.0 - abs(w0[0, 0]) ** 2 - abs(w0[0, 1]) ** 2
    v_yy = 1.0 - abs(w0[1, 0]) ** 2 - abs(w0[1, 1]) ** 2
    v_xy = -w0[0, 0] * numpy.conj(w0[1, 0]) - w0[0, 1] * numpy.conj(w0[1, 1])
    c_add = numpy.array([[v_xx, v_xy], [numpy.conj(v_xy), v_yy]], dtype=complex)
    c_add[numpy.abs(c_add) < ROUNDING_FLOOR] = 0.0
    return NoiseCorrection(
        w0=w0,
        omega=(float(omega_x), float(omega_y)),
        omega_max=omega_max,
        c_add=c_add,
        l_add=chol2(c_add),
    )


def sample_trusted_noise(
    nc: NoiseCorrection, rng: numpy.random.Generator, count: typing.Optional[int] = None
) -> CVec2:
    """
    Draws N_add = L_add xi with xi holding independent unit-variance quadratures
    :param nc: The frame's correction
    :param rng: Receiver generator
    :param count: Number of symbols; None draws a single (2,) vector
    :return: Added noise, one row per symbol
    """
    shape = (2,) if count is None else (count, 2)
    return unit_quadrature_noise(rng, shape) @ nc.l_add.T


def apply_cmimo(nc: NoiseCorrection, s_in: CVec2) -> CVec2:
    """Normalized signal path W0 S_in without trusted noise"""
    return as_cvec2(s_in) @ nc.w0.T


def qmimo_apply(nc: NoiseCorrection, s_in: CVec2, rng: numpy.random.Generator) -> CVec2:
    """
    Q-MIMO output W0 S_in + N_add, one noise draw per symbol
    :param nc: The frame's correction
    :param s_in: Received symbols, (2,) or (n, 2)
    :param rng: Receiver generator
    :return: Corrected symbols in the shape of s_in
    """
    s_in = as_cvec2(s_in)
    count = None if s_in.ndim == 1 else len(s_in)
    return apply_cmimo(nc, s_in) + sample_trusted_noise(nc, rng, count)


def svd_noise_path(
    correction: typing.Union[NoiseCorrection, CMat2], n_hat: CVec2, n_d: CVec2
) -> CVec2:
    """
    Builds U (Omega V N + sqrt(1 - Omega^2) N_D) from the factors of W0
    :param correction: A NoiseCorrection or a normalized matrix W0
    :param n_hat: Noise entering through W0, (2,) or (n, 2)
    :param n_d: Vacuum entering through the dump ports, same shape as n_hat
    :return: The combined noise at the outputs
    """
    w0 = correction.w0 if isinstance(correction, NoiseCorrection) else as_cmat2(correction)
    left, sigma, right = svd2(w0)
    dump = numpy.sqrt(numpy.clip(1.0 - sigma**2, 0.0, None))
    inner = (as_cvec2(n_hat) @ right.T) * sigma + as_cvec2(n_d) * dump
    return inner @ left.T


def completion_residual(nc: NoiseCorrection) -> float:
    """Largest entry of |W0 W0† + C_add - I|"""
    return float(numpy.max(numpy.abs(nc.w0 @ nc.w0.conj().T + nc.c_add - IDENTITY)))
