"""Parameters and results of the secret-key-rate calculator"""

# External imports
import dataclasses
import typing

# Local imports
from .errors import InvalidSplitError

# Module level constants
HOMODYNE = "homodyne"
HETERODYNE = "heterodyne"
DETECTIONS = (HOMODYNE, HETERODYNE)
POLICY_BOTH = "both"
POLICY_EXCESS_NOISE = "excess_noise"
POLICIES = (POLICY_BOTH, POLICY_EXCESS_NOISE)


@dataclasses.dataclass(frozen=True)
class FiniteSizeParams:
    """Block split and failure probabilities of the finite-size analysis"""

    n_total: int = 10**8
    n_key: int = 3 * 10**7
    dim_h: int = 2
    eps_bar: float = 1e-10
    eps_pe: float = 1e-10
    eps_pa: float = 1e-10
    policy: str = POLICY_BOTH

    def __post_init__(self) -> None:
        if self.n_key < 1:
            raise ValueError(f"n_key must be positive, got {self.n_key}")
        if self.n_key >= self.n_total:
            raise InvalidSplitError(
                f"n_key ({self.n_key}) must be below n_total ({self.n_total})"
            )
        for name in ("eps_bar", "eps_pe", "eps_pa"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")
        if self.dim_h < 1:
            raise ValueError(f"dim_h must be positive, got {self.dim_h}")
        if self.policy not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}, got {self.policy}")

    @property
    def n_estimation(self) -> int:
        """Symbols sacrificed for parameter estimation"""
        return self.n_total - self.n_key


@dataclasses.dataclass(frozen=True)
class KeyRateParams:
    """Channel, detector and protocol parameters; variances in SNU, rates in Hz"""

    v_a: float = 4.0
    transmittance: float = 1.0
    eps: float = 0.0
    beta: float = 0.96
    f_rep: float = 500e6
    overhead_alpha: float = 0.1
    eta_d: float = 1.0
    v_el: float = 0.0
    detection: str = HOMODYNE
    finite_size: typing.Optional[FiniteSizeParams] = None

    def __post_init__(self) -> None:
        if self.v_a <= 1:
            raise ValueError(f"v_a must exceed 1, got {self.v_a}")
        if not 0 < self.transmittance <= 1:
            raise ValueError(f"transmittance must lie in (0, 1], got {self.transmittance}")
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if self.f_rep <= 0:
            raise ValueError(f"f_rep must be positive, got {self.f_rep}")
        if not 0 <= self.overhead_alpha < 1:
            raise ValueError(f"overhead_alpha must lie in [0, 1), got {self.overhead_alpha}")
        if not 0 < self.eta_d <= 1:
            raise ValueError(f"eta_d must lie in (0, 1], got {self.eta_d}")
        if self.v_el < 0:
            raise ValueError(f"v_el must be nonnegative, got {self.v_el}")
        if self.detection not in DETECTIONS:
            raise ValueError(f"detection must be one of {DETECTIONS}, got {self.detection}")

    @property
    def quadratures(self) -> int:
        """Quadratures measured per symbol: 1 for homodyne, 2 for heterodyne"""
        return 1 if self.detection == HOMODYNE else 2

    @property
    def symbol_rate_factor(self) -> float:
        """f_rep (1 - alpha), the rate of quantum symbols"""
        return self.f_rep * (1 - self.overhead_alpha)


@dataclasses.dataclass(frozen=True)
class KeyRateResult:
    """
    Information quantities in bits per symbol and rates in bits per second
    Rates are clamped at zero; the raw values are kept next to them.
    """

    i_ab: float
    chi_be: float
    k_asy: float
    k_asy_raw: float
    k_fin: typing.Optional[float] = None
    k_fin_raw: typing.Optional[float] = None
    delta: typing.Optional[float] = None
    s_pe: typing.Optional[float] = None
    worst_case: typing.Optional[typing.Tuple[float, float]] = None
