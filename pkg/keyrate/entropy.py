"""Mutual information and Holevo bound for Gaussian modulation with a trusted noisy detector"""

# External imports
import typing
import numpy
import scipy.linalg
import scipy.special

# Local imports
from estimation import build_covariance
from .errors import NumericalDomainError
from .params import HOMODYNE, KeyRateParams

# Module level constants
UNITY_TOLERANCE = 1e-12
DISCRIMINANT_TOLERANCE = 1e-9
OMEGA_1 = numpy.array([[0.0, 1.0], [-1.0, 0.0]])


def entropy_g(x: typing.Union[float, numpy.ndarray]) -> numpy.ndarray:
    """
    Von Neumann entropy in bits of a thermal mode with symplectic eigenvalue x
    Values within roundoff of 1 and below 1 contribute nothing.
    :param x: Symplectic eigenvalue(s)
    :return: g(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2)
    """
    x = numpy.asarray(x, dtype=float)
    x = numpy.where(numpy.abs(x - 1) < UNITY_TOLERANCE, 1.0, x)
    upper = (x + 1) / 2
    lower = numpy.clip((x - 1) / 2, 0.0, None)
    value = (scipy.special.xlogy(upper, upper) - scipy.special.xlogy(lower, lower)) / numpy.log(2)
    return numpy.where(x > 1, value, 0.0)


def _noise_terms(p: KeyRateParams) -> typing.Tuple[float, float, float]:
    """chi_line, chi_det and chi_tot, all input-referred"""
    chi_line = 1 / p.transmittance - 1 + p.eps
    if p.detection == HOMODYNE:
        chi_det = (1 - p.eta_d + p.v_el) / p.eta_d
    else:
        chi_det = (2 - p.eta_d + 2 * p.v_el) / p.eta_d
    return chi_line, chi_det, chi_line + chi_det / p.transmittance


def _eigen_pair(first: float, second: float) -> typing.Tuple[float, float]:
    """Roots of lambda^4 - first lambda^2 + second = 0 as a symplectic pair"""
    discriminant = first**2 - 4 * second
    if discriminant < -DISCRIMINANT_TOLERANCE:
        raise NumericalDomainError(f"Negative discriminant {discriminant:.3e}")
    root = numpy.sqrt(max(discriminant, 0.0))
    upper, lower = (first + root) / 2, (first - root) / 2
    if lower < 0:
        raise NumericalDomainError(f"Negative squared eigenvalue {lower:.3e}")
    return float(numpy.sqrt(upper)), float(numpy.sqrt(lower))


def mutual_information(p: KeyRateParams) -> float:
    """
    Shannon information between Alice and Bob in bits per symbol
    :param p: Key-rate parameters
    :return: I(A:B)
    """
    _, _, chi_tot = _noise_terms(p)
    if 1 + chi_tot <= 0:
        raise NumericalDomainError(f"Total added noise {chi_tot} is below -1")
    information = numpy.log2((p.v_a + chi_tot) / (1 + chi_tot))
    return float(information / 2 if p.detection == HOMODYNE else information)


def holevo_eigenvalues(p: KeyRateParams) -> numpy.ndarray:
    """
    Symplectic eigenvalues in closed form: the two of Eve's state and the two conditioned on
    Bob's measurement
    :param p: Key-rate parameters
    :return: (lambda_1, lambda_2, lambda_3, lambda_4)
    """
    v, t = p.v_a, p.transmittance
    chi_line, chi_det, chi_tot = _noise_terms(p)
    a = v**2 * (1 - 2 * t) + 2 * t + t**2 * (v + chi_line) ** 2
    b = t**2 * (v * chi_line + 1) ** 2
    root_b = numpy.sqrt(b)
    if p.detection == HOMODYNE:
        scale = t * (v + chi_tot)
        c = (v * root_b + t * (v + chi_line) + a * chi_det) / scale
        d = root_b * (v + root_b * chi_det) / scale
    else:
        scale = (t * (v + chi_tot)) ** 2
        c = (
            a * chi_det**2
            + b
            + 1
            + 2 * chi_det * (v * root_b + t * (v + chi_line))
            + 2 * t * (v**2 - 1)
        ) / scale
        d = ((v + root_b * chi_det) / (t * (v + chi_tot))) ** 2
    return numpy.array(_eigen_pair(a, b) + _eigen_pair(c, d))


def holevo_bound(p: KeyRateParams) -> float:
    """
    Holevo information between Bob and Eve under reverse reconciliation, closed form
    :param p: Key-rate parameters
    :return: chi(B:E) in bits per symbol
    """
    eigenvalues = entropy_g(holevo_eigenvalues(p))
    return float(eigenvalues[0] + eigenvalues[1] - eigenvalues[2] - eigenvalues[3])


def symplectic_spectrum(covariance: numpy.ndarray) -> numpy.ndarray:
    """
    Symplectic eigenvalues of a covariance over (x1, p1, x2, p2, ...)
    :param covariance: Real symmetric 2k x 2k covariance
    :return: The k eigenvalues in ascending order
    """
    modes = len(covariance) // 2
    omega = scipy.linalg.block_diag(*([OMEGA_1] * modes))
    spectrum = numpy.sort(numpy.abs(numpy.linalg.eigvals(1j * omega @ covariance)))
    return spectrum[::2]


def _detector_covariance(p: KeyRateParams) -> numpy.ndarray:
    """
    Covariance over (A, B, F, G) after Bob's detector has mixed in its trusted noise
    The detector is a beam splitter of transmittance eta_d fed by one arm of an EPR pair, so
    electronic noise needs eta_d < 1.
    :param p: Key-rate parameters
    :return: The 8x8 covariance
    """
    if p.eta_d == 1 and p.v_el > 0:
        raise NumericalDomainError(
            f"The beam splitter detector model needs eta_d < 1 to carry v_el = {p.v_el}"
        )
    blocks = build_covariance(p.v_a, p.transmittance, p.eps)
    identity, sigma_z = numpy.eye(2), numpy.diag([1.0, -1.0])
    if p.eta_d < 1:
        spread = p.v_el / (1 - p.eta_d)
        thermal = 1 + (spread if p.detection == HOMODYNE else 2 * spread)
    else:
        thermal = 1.0
    epr = numpy.sqrt(thermal**2 - 1)
    zeros = numpy.zeros((2, 2))
    gamma = numpy.block(
        [
            [blocks.alice * identity, blocks.cross * sigma_z, zeros, zeros],
            [blocks.cross * sigma_z, blocks.bob * identity, zeros, zeros],
            [zeros, zeros, thermal * identity, epr * sigma_z],
            [zeros, zeros, epr * sigma_z, thermal * identity],
        ]
    )
    through, leak = numpy.sqrt(p.eta_d), numpy.sqrt(1 - p.eta_d)
    splitter = numpy.eye(8)
    splitter[2:6, 2:6] = numpy.block(
        [[through * identity, leak * identity], [-leak * identity, through * identity]]
    )
    return splitter @ gamma @ splitter.T


def symplectic_holevo_bound(p: KeyRateParams) -> float:
    """
    Holevo information from the symplectic spectra of explicitly assembled covariances
    Eve's entropy comes from the Alice-Bob state before detection; the conditional entropy from
    the Alice and detector modes after conditioning on Bob's measurement.
    :param p: Key-rate parameters
    :return: chi(B:E) in bits per symbol
    """
    gamma = _detector_covariance(p)
    eve = symplectic_spectrum(build_covariance(p.v_a, p.transmittance, p.eps).matrix())
    bob = [2, 3]
    rest = [0, 1, 4, 5, 6, 7]
    gamma_rest = gamma[numpy.ix_(rest, rest)]
    gamma_bob = gamma[numpy.ix_(bob, bob)]
    coupling = gamma[numpy.ix_(rest, bob)]
    if p.detection == HOMODYNE:
        projector = numpy.diag([1 / gamma_bob[0, 0], 0.0])
    else:
        projector = numpy.linalg.inv(gamma_bob + numpy.eye(2))
    conditional = gamma_rest - coupling @ projector @ coupling.T
    conditioned = symplectic_spectrum(conditional)
    return float(numpy.sum(entropy_g(eve)) - numpy.sum(entropy_g(conditioned)))


def holevo_cross_check(p: KeyRateParams) -> typing.Tuple[float, float, float]:
    """
    Evaluates both Holevo paths
    :param p: Key-rate parameters
    :return: Closed form, symplectic, absolute difference
    """
    closed, numeric = holevo_bound(p), symplectic_holevo_bound(p)
    return closed, numeric, abs(closed - numeric)
