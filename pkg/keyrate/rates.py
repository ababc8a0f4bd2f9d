"""Asymptotic and finite-size secret key rates"""

# External imports
import dataclasses
import logging
import typing
import numpy
import pandas
import scipy.special

# Local imports
from channel import transmittance_at
from .entropy import holevo_bound, mutual_information
from .errors import NumericalDomainError
from .params import POLICY_BOTH, KeyRateParams, KeyRateResult

logger = logging.getLogger(__name__)

# Module level constants
FIBRE_LOSS_DB_PER_KM = 0.2
MODULATION_GRID = numpy.arange(1.05, 60.0, 0.01)
RATE_CURVE_COLUMNS = [
    "label", "distance_km", "T", "eps", "K_asy_bps", "K_fin_bps", "I_AB", "chi_BE",
]  # fmt: skip


def delta_n(n: float, dim_h: int = 2, eps_bar: float = 1e-10, eps_pa: float = 1e-10) -> float:
    """
    Privacy amplification penalty in bits per symbol
    :param n: Key symbols
    :param dim_h: Raw key alphabet dimension
    :param eps_bar: Smoothing parameter
    :param eps_pa: Privacy amplification failure probability
    :return: (2 dim_h + 3) sqrt(log2(2/eps_bar)/n) + (2/n) log2(1/eps_pa)
    """
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    return float(
        (2 * dim_h + 3) * numpy.sqrt(numpy.log2(2 / eps_bar) / n) + 2 / n * numpy.log2(1 / eps_pa)
    )


def worst_case_parameters(p: KeyRateParams) -> typing.Tuple[float, float]:
    """
    Transmittance lowered and excess noise raised to the edge of the estimation confidence region
    The estimators regress Bob's quadratures on Alice's over the m = N - n sacrificed symbols,
    with each heterodyne symbol contributing two samples at half the signal.
    :param p: Key-rate parameters with finite_size set
    :return: (T_low, eps_high)
    """
    if p.finite_size is None:
        raise ValueError("Worst-case parameters need the finite-size settings")
    fs = p.finite_size
    k = p.quadratures
    w = numpy.sqrt(2) * scipy.special.erfinv(1 - fs.eps_pe)
    root_t = numpy.sqrt(p.eta_d * p.transmittance / k)
    noise = 1 + p.v_el + p.eta_d * p.transmittance * p.eps / k
    samples = k * fs.n_estimation

    if fs.policy == POLICY_BOTH:
        root_std = numpy.sqrt(noise / (samples * (p.v_a - 1)))
        low_root = root_t - w * root_std
        if low_root <= 0:
            raise NumericalDomainError(
                f"Confidence region reaches zero transmittance with {fs.n_estimation} samples"
            )
        t_low = k * low_root**2 / p.eta_d
    else:
        t_low = p.transmittance
    noise_margin = w * noise * numpy.sqrt(2) / numpy.sqrt(samples)
    eps_high = k * (noise + noise_margin - 1 - p.v_el) / (p.eta_d * t_low)
    return float(t_low), float(eps_high)


def key_rate_asymptotic(p: KeyRateParams) -> KeyRateResult:
    """
    K_asy = f_rep (1 - alpha) max(0, beta I - chi)
    :param p: Key-rate parameters
    :return: Information quantities and the rate
    """
    i_ab, chi_be = mutual_information(p), holevo_bound(p)
    raw = p.symbol_rate_factor * (p.beta * i_ab - chi_be)
    return KeyRateResult(i_ab=i_ab, chi_be=chi_be, k_asy=max(raw, 0.0), k_asy_raw=raw)


def key_rate_finite(p: KeyRateParams) -> KeyRateResult:
    """
    K_fin = f_rep (1 - alpha) (n/N) [beta I - S_PE - Delta(n)], S_PE being the Holevo bound at
    the worst-case parameters; the asymptotic rate is filled in alongside
    :param p: Key-rate parameters with finite_size set
    :return: Information quantities, both rates and the penalty breakdown
    """
    if p.finite_size is None:
        raise ValueError("key_rate_finite needs the finite-size settings")
    fs = p.finite_size
    asymptotic = key_rate_asymptotic(p)
    t_low, eps_high = worst_case_parameters(p)
    s_pe = holevo_bound(dataclasses.replace(p, transmittance=t_low, eps=eps_high))
    delta = delta_n(fs.n_key, fs.dim_h, fs.eps_bar, fs.eps_pa)
    share = fs.n_key / fs.n_total
    raw = p.symbol_rate_factor * share * (p.beta * asymptotic.i_ab - s_pe - delta)
    return dataclasses.replace(
        asymptotic,
        k_fin=max(raw, 0.0),
        k_fin_raw=raw,
        delta=delta,
        s_pe=s_pe,
        worst_case=(t_low, eps_high),
    )


def key_rate(p: KeyRateParams) -> KeyRateResult:
    """Finite-size result when finite-size settings are present, asymptotic otherwise"""
    return key_rate_asymptotic(p) if p.finite_size is None else key_rate_finite(p)


def optimal_modulation(
    p: KeyRateParams, grid: typing.Optional[numpy.ndarray] = None
) -> typing.Tuple[float, float]:
    """
    Grid search for the Alice variance that maximizes the asymptotic rate
    :param p: Key-rate parameters, v_a is ignored
    :param grid: Candidate V_A values, all above 1
    :return: (best V_A, its K_asy_raw)
    """
    grid = MODULATION_GRID if grid is None else numpy.asarray(grid, dtype=float)
    rates = numpy.array(
        [key_rate_asymptotic(dataclasses.replace(p, v_a=float(v_a))).k_asy_raw for v_a in grid]
    )
    best = int(numpy.argmax(rates))
    return float(grid[best]), float(rates[best])


def rate_curve(
    p: KeyRateParams,
    distances: typing.Sequence[float],
    eps_by_label: typing.Mapping[str, float],
    loss_db_per_km: float = FIBRE_LOSS_DB_PER_KM,
    markers: typing.Sequence[typing.Tuple[float, float]] = (),
) -> typing.List[typing.Dict[str, typing.Any]]:
    """
    Key rate against distance for each labelled excess noise
    :param p: Key-rate parameters; transmittance and eps are overridden per point
    :param distances: Fibre lengths in km
    :param eps_by_label: Excess noise per curve
    :param loss_db_per_km: Fibre attenuation
    :param markers: Extra (distance, T) points with a measured rather than nominal T
    :return: One row per curve and point, keyed by RATE_CURVE_COLUMNS
    """
    points = [(float(d), float(transmittance_at(d, loss_db_per_km))) for d in distances]
    points += [(float(d), float(t)) for d, t in markers]
    rows = []
    for label, eps in eps_by_label.items():
        for distance, transmittance in points:
            point = dataclasses.replace(p, transmittance=transmittance, eps=eps)
            try:
                result = key_rate(point)
            except NumericalDomainError as error:
                logger.warning("No key rate for %s at %.1f km: %s", label, distance, error)
                continue
            rows.append(
                {
                    "label": label,
                    "distance_km": distance,
                    "T": transmittance,
                    "eps": eps,
                    "K_asy_bps": result.k_asy,
                    "K_fin_bps": numpy.nan if result.k_fin is None else result.k_fin,
                    "I_AB": result.i_ab,
                    "chi_BE": result.chi_be,
                }
            )
    return rows


def rate_curve_frame(rows: typing.Iterable[typing.Dict[str, typing.Any]]) -> pandas.DataFrame:
    """Rate-curve table with its fixed column order"""
    return pandas.DataFrame(list(rows), columns=RATE_CURVE_COLUMNS)
