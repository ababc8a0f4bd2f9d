"""Covariance-based estimation of transmittance and excess noise per polarization"""

# External imports
import dataclasses
import logging
import typing
import numpy
import pandas

# Local imports
from linalg2 import unit_quadrature_noise
from qmimo import NoiseCorrection
from .errors import ConsistencyError, InsufficientDataError, UndefinedEstimateError
from .moments import BlockMoments, PairedBlock

logger = logging.getLogger(__name__)

# Module level constants
MIN_BLOCK_SYMBOLS = 10_000
POLARIZATIONS = ("X", "Y")
CMIMO = "C-MIMO"
QMIMO = "Q-MIMO"
METHODS = (CMIMO, QMIMO)
REPORT_COLUMNS = ["block_id", "pol", "method", "T_prime", "eps_e", "delta_eps_pred", "n_symbols"]

PairedData = typing.Union[PairedBlock, BlockMoments]


@dataclasses.dataclass(frozen=True)
class ChannelEstimate:
    """T' and eps_e per polarization for one data path, with Gaussian-model standard errors"""

    method: str
    t_prime: numpy.ndarray
    eps: numpy.ndarray
    t_std: numpy.ndarray
    eps_std: numpy.ndarray
    n_symbols: int

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method}")


@dataclasses.dataclass(frozen=True)
class CovarianceBlocks:
    """The three scalar blocks of a two-mode symmetric covariance: a I, c sigma_z, b I"""

    alice: float
    cross: float
    bob: float

    def matrix(self) -> numpy.ndarray:
        """The 4x4 real covariance over (x_A, p_A, x_B, p_B)"""
        identity = numpy.eye(2)
        sigma_z = numpy.diag([1.0, -1.0])
        return numpy.block(
            [
                [self.alice * identity, self.cross * sigma_z],
                [self.cross * sigma_z, self.bob * identity],
            ]
        )


def _moments(data: PairedData, min_symbols: int) -> BlockMoments:
    """
    Moments of a paired block, or the accumulated moments themselves, checked for length
    :param data: Paired block or accumulated moments
    :param min_symbols: Statistical floor on the block length
    :return: The moments of the data
    """
    moments = data if isinstance(data, BlockMoments) else BlockMoments.from_block(data)
    if moments.count < min_symbols:
        raise InsufficientDataError(
            f"Estimation needs at least {min_symbols} symbols, got {moments.count}"
        )
    return moments


def estimate_transmittance(
    data: PairedData, min_symbols: int = MIN_BLOCK_SYMBOLS, skip_silent: bool = False
) -> numpy.ndarray:
    """
    sqrt(T') = sum(x_A x_B + p_A p_B) / sum(x_A^2 + p_A^2), per polarization
    :param data: Paired block or accumulated moments
    :param min_symbols: Statistical floor on the block length
    :param skip_silent: Return NaN for a polarization Alice left dark instead of raising
    :return: T' per polarization, clamped to at most 1
    :raises UndefinedEstimateError: Alice is dark on a polarization that is not skipped, or Bob's
        data is not positively correlated with Alice's
    """
    moments = _moments(data, min_symbols)
    silent = moments.alice_power <= 0
    if numpy.any(silent) and not (skip_silent and not numpy.all(silent)):
        raise UndefinedEstimateError("Alice sent no power on at least one polarization")
    with numpy.errstate(divide="ignore", invalid="ignore"):
        root = numpy.where(silent, numpy.nan, moments.cross / moments.alice_power)
    if numpy.any(root[~silent] <= 0):
        raise UndefinedEstimateError(f"Received data is not positively correlated: {root}")
    return numpy.minimum(root**2, 1.0)


def estimate_excess_noise(data: PairedData, t_prime: numpy.ndarray, v_a: float) -> numpy.ndarray:
    """
    eps_e = (Var_B - T' (V_A - 1) - 1) / T' with Var_B pooled over both quadratures
    Negative results are returned as they are.
    :param data: Paired block or accumulated moments
    :param t_prime: Transmittance estimate per polarization
    :param v_a: Nominal Alice variance V_A in SNU
    :return: Excess noise estimate per polarization, SNU
    """
    t_prime = numpy.asarray(t_prime, dtype=float)
    if numpy.any(t_prime <= 0):
        raise UndefinedEstimateError(f"T' must be positive, got {t_prime}")
    moments = data if isinstance(data, BlockMoments) else BlockMoments.from_block(data)
    return (moments.bob_variance - t_prime * (v_a - 1) - 1) / t_prime


def estimate_channel(
    data: PairedData,
    v_a: float,
    method: str,
    min_symbols: int = MIN_BLOCK_SYMBOLS,
    skip_silent: bool = False,
) -> ChannelEstimate:
    """
    Estimates T' and then eps_e from one data path
    :param data: Paired block or accumulated moments
    :param v_a: Nominal Alice variance V_A in SNU
    :param method: CMIMO or QMIMO
    :param min_symbols: Statistical floor on the block length
    :param skip_silent: NaN out polarizations Alice left dark
    :return: The estimate with its standard errors
    """
    moments = _moments(data, min_symbols)
    t_prime = estimate_transmittance(moments, min_symbols, skip_silent)
    eps = estimate_excess_noise(moments, t_prime, v_a)
    bob_variance = moments.bob_variance

    # regression of each Bob quadrature on Alice's over 2n samples
    residual = numpy.maximum(bob_variance - t_prime * (v_a - 1), 1e-12)
    root_std = numpy.sqrt(residual / (2 * moments.count * (v_a - 1)))
    t_std = 2 * numpy.sqrt(t_prime) * root_std
    variance_std = bob_variance / numpy.sqrt(moments.count)
    eps_std = numpy.hypot(variance_std / t_prime, (bob_variance - 1) / t_prime**2 * t_std)
    logger.debug("%s estimate over %d symbols: T' %s, eps %s", method, moments.count, t_prime, eps)
    return ChannelEstimate(
        method=method,
        t_prime=t_prime,
        eps=eps,
        t_std=t_std,
        eps_std=eps_std,
        n_symbols=moments.count,
    )


def predict_underestimation(nc: NoiseCorrection, t_prime: numpy.ndarray) -> numpy.ndarray:
    """
    Excess noise the C-MIMO path misses: (V_XX / T'_X, V_YY / T'_Y)
    :param nc: Correction of the frame
    :param t_prime: Transmittance estimate per polarization
    :return: Predicted gap eps(Q-MIMO) - eps(C-MIMO) per polarization
    """
    t_prime = numpy.asarray(t_prime, dtype=float)
    if numpy.any(t_prime <= 0):
        raise UndefinedEstimateError(f"T' must be positive, got {t_prime}")
    return numpy.array([nc.v_xx, nc.v_yy]) / t_prime


def build_covariance(
    v_a: float, transmittance: float, eps: float, corruption: float = 0.0
) -> CovarianceBlocks:
    """
    Blocks of the entanglement-based covariance between Alice and Bob for one polarization
    :param v_a: Alice variance V_A in SNU, above 1
    :param transmittance: Channel transmittance in (0, 1]
    :param eps: Excess noise in SNU
    :param corruption: Trusted noise variance missing from Bob's data, 0 for the honest form
    :return: (V_A, sqrt(T (V_A^2 - 1)), T (V_A - 1 + eps) + 1 - corruption)
    """
    if v_a <= 1:
        raise ValueError(f"v_a must exceed 1, got {v_a}")
    if not 0 < transmittance <= 1:
        raise ValueError(f"transmittance must lie in (0, 1], got {transmittance}")
    bob = transmittance * (v_a - 1 + eps) + 1 - corruption
    if eps == 0 and corruption == 0 and bob < 1:
        raise ConsistencyError(f"Bob variance {bob} is below shot noise")
    return CovarianceBlocks(
        alice=v_a, cross=float(numpy.sqrt(transmittance * (v_a**2 - 1))), bob=bob
    )


def synthetic_block(
    v_a: float, transmittance: float, eps: float, n_symbols: int, rng: numpy.random.Generator
) -> PairedBlock:
    """
    Prepare-and-measure Gaussian data with the statistics of build_covariance, both pols alike
    :param v_a: Alice variance V_A in SNU
    :param transmittance: Channel transmittance
    :param eps: Excess noise in SNU
    :param n_symbols: Block length
    :param rng: Generator
    :return: A paired block
    """
    blocks = build_covariance(v_a, transmittance, eps)
    shape = (n_symbols, 2)
    alice = numpy.sqrt(blocks.alice - 1) * unit_quadrature_noise(rng, shape)
    noise_std = numpy.sqrt(blocks.bob - transmittance * (blocks.alice - 1))
    noise = noise_std * unit_quadrature_noise(rng, shape)
    return PairedBlock(alice=alice, bob=numpy.sqrt(transmittance) * alice + noise)


def estimation_rows(
    block_id: typing.Union[int, str],
    estimate: ChannelEstimate,
    delta_eps_pred: typing.Optional[numpy.ndarray] = None,
) -> typing.List[typing.Dict[str, typing.Any]]:
    """
    One report row per polarization of an estimate
    :param block_id: Label of the block or trial the estimate pools
    :param estimate: The estimate
    :param delta_eps_pred: Predicted underestimation per polarization, NaN when absent
    :return: Rows keyed by the report columns
    """
    if delta_eps_pred is None:
        delta_eps_pred = numpy.full(2, numpy.nan)
    return [
        {
            "block_id": block_id,
            "pol": pol_name,
            "method": estimate.method,
            "T_prime": float(estimate.t_prime[pol]),
            "eps_e": float(estimate.eps[pol]),
            "delta_eps_pred": float(delta_eps_pred[pol]),
            "n_symbols": estimate.n_symbols,
        }
        for pol, pol_name in enumerate(POLARIZATIONS)
    ]


def estimation_report_frame(
    rows: typing.Iterable[typing.Dict[str, typing.Any]]
) -> pandas.DataFrame:
    """Estimation report table with its fixed column order"""
    return pandas.DataFrame(list(rows), columns=REPORT_COLUMNS)
