"""Transmitter symbol sources: Gaussian-modulated quantum symbols and boosted QPSK training"""

# External imports
import dataclasses
import numpy

# Local imports
from linalg2 import CVec2

# Module level constants
QPSK_POINTS = numpy.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j])


@dataclasses.dataclass(frozen=True)
class ModulationParams:
    """
    Transmitter settings
    v_a is the EB-picture variance, so the modulation variance per quadrature is v_a - 1.
    v_a = 1 describes vacuum calibration shots.
    """

    v_a: float = 4.0
    training_boost_db: float = 20.0
    dual_pol: bool = True

    def __post_init__(self) -> None:
        if self.v_a < 1:
            raise ValueError(f"v_a must be at least 1 (vacuum), got {self.v_a}")

    @property
    def modulation_variance(self) -> float:
        """Per-quadrature variance of the quantum symbols"""
        return self.v_a - 1

    @property
    def training_power(self) -> float:
        """Per-quadrature second moment of the training symbols"""
        return 10 ** (self.training_boost_db / 10) * self.modulation_variance


def gen_quantum_symbols(n: int, params: ModulationParams, rng: numpy.random.Generator) -> CVec2:
    """
    Draws Gaussian-modulated symbols, every quadrature i.i.d. N(0, v_a - 1)
    :param n: Number of symbols
    :param params: Modulation settings
    :param rng: Transmitter generator
    :return: (n, 2) complex amplitudes, Y zeroed in single-pol mode
    """
    if n <= 0:
        raise ValueError(f"Symbol count must be positive, got {n}")
    scale = numpy.sqrt(params.modulation_variance)
    symbols = scale * (rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2)))
    if not params.dual_pol:
        symbols[:, 1] = 0.0
    return symbols


def gen_training_symbols(
    n: int, params: ModulationParams, rng: numpy.random.Generator
) -> CVec2:
    """
    Draws QPSK training symbols on both polarizations
    Training stays dual-pol in single-pol mode so the full 2x2 equalizer is trained.
    :param n: Number of symbols
    :param params: Modulation settings
    :param rng: Transmitter generator
    :return: (n, 2) complex amplitudes with per-quadrature power params.training_power
    """
    if n <= 0:
        raise ValueError(f"Symbol count must be positive, got {n}")
    return numpy.sqrt(params.training_power) * QPSK_POINTS[rng.integers(0, 4, size=(n, 2))]
