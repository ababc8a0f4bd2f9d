"""The evolving dual-polarization Jones channel: fixed loss and PDL, drifting unitary SOP"""

# External imports
import dataclasses
import typing
import numpy

# Local imports
from linalg2 import CMat2, as_cmat2


@dataclasses.dataclass(frozen=True)
class ChannelParams:
    """Scenario parameters of the quantum channel"""

    symbol_rate: float = 500e6
    rotation_speed: float = 2000.0
    pdl_db: float = 0.0
    phase_drift_std: float = 0.0
    attenuation_db: float = 0.0
    excess_noise: float = 0.0
    pdl_orientation: typing.Optional[float] = None
    rng_seed: typing.Optional[int] = None

    def __post_init__(self) -> None:
        if self.symbol_rate <= 0:
            raise ValueError(f"symbol_rate must be positive, got {self.symbol_rate}")
        for name in ("pdl_db", "attenuation_db", "excess_noise", "phase_drift_std"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative, got {getattr(self, name)}")

    @property
    def max_transmittance(self) -> float:
        """Power transmittance of the stronger polarization axis"""
        return 10 ** (-self.attenuation_db / 10)

    @property
    def pdl_ratio(self) -> float:
        """Amplitude ratio of the weaker axis to the stronger one"""
        return 10 ** (-self.pdl_db / 20)

    @property
    def rotation_step(self) -> float:
        """Deterministic SOP rotation per symbol, radians"""
        return self.rotation_speed / self.symbol_rate


@dataclasses.dataclass(frozen=True)
class ChannelState:
    """Current Jones matrix with the bookkeeping of how far the SOP has drifted"""

    jones: CMat2
    step_index: int = 0
    rotation: float = 0.0
    phase_x: float = 0.0
    phase_y: float = 0.0


@dataclasses.dataclass(frozen=True)
class ChannelTrajectory:
    """Per-symbol Jones matrices of a run of steps and the state after the last step"""

    jones: CMat2
    final_state: ChannelState


def rotation(angle: float) -> CMat2:
    """Real rotation [[cos, -sin], [sin, cos]]"""
    return numpy.array(
        [[numpy.cos(angle), -numpy.sin(angle)], [numpy.sin(angle), numpy.cos(angle)]],
        dtype=complex,
    )


def transmittance_at(distance_km: typing.Any, loss_db_per_km: float = 0.2) -> numpy.ndarray:
    """
    Fiber transmittance after a given length
    :param distance_km: Scalar or array of distances
    :param loss_db_per_km: Attenuation coefficient
    :return: 10^(-loss * d / 10)
    """
    return 10 ** (-loss_db_per_km * numpy.asarray(distance_km, dtype=float) / 10)


def make_channel(
    params: ChannelParams, rng: typing.Optional[numpy.random.Generator] = None
) -> ChannelState:
    """
    Builds J0 = sqrt(Tmax) R(theta0) diag(1, 10^(-pdl/20)) R(theta0')
    :param params: Channel parameters
    :param rng: Generator for the two initial angles, seeded from params.rng_seed when omitted
    :return: The initial channel state
    """
    rng = numpy.random.default_rng(params.rng_seed) if rng is None else rng
    output_angle, input_angle = rng.uniform(0.0, 2 * numpy.pi, size=2)
    if params.pdl_orientation is not None:
        input_angle = params.pdl_orientation
    jones = (
        numpy.sqrt(params.max_transmittance)
        * rotation(output_angle)
        @ numpy.diag([1.0, params.pdl_ratio])
        @ rotation(input_angle)
    )
    return ChannelState(jones=as_cmat2(jones))


def delta_jones(
    rotation_step: float, phase_x: numpy.ndarray, phase_y: numpy.ndarray
) -> CMat2:
    """
    Unitary increment [[c e^{j phi1}, -s e^{j phi2}], [s e^{-j phi2}, c e^{-j phi1}]]
    PDL is held in J0, so the increment carries no loss term.
    :param rotation_step: Rotation angle of the increment
    :param phase_x: phi1, scalar or array
    :param phase_y: phi2, same shape as phase_x
    :return: One increment, or a stack matching the phase arrays
    """
    phase_x = numpy.asarray(phase_x, dtype=float)
    phase_y = numpy.asarray(phase_y, dtype=float)
    cosine, sine = numpy.cos(rotation_step), numpy.sin(rotation_step)
    increment = numpy.empty(phase_x.shape + (2, 2), dtype=complex)
    increment[..., 0, 0] = cosine * numpy.exp(1j * phase_x)
    increment[..., 0, 1] = -sine * numpy.exp(1j * phase_y)
    increment[..., 1, 0] = sine * numpy.exp(-1j * phase_y)
    increment[..., 1, 1] = cosine * numpy.exp(-1j * phase_x)
    return increment


def step_channel(
    state: ChannelState, params: ChannelParams, rng: numpy.random.Generator
) -> ChannelState:
    """
    Advances the channel by one symbol: J' = dJ J
    :param state: Current state
    :param params: Channel parameters
    :param rng: Source of the phase random-walk increments
    :return: The next state
    """
    phase_x, phase_y = rng.normal(0.0, params.phase_drift_std, size=2)
    increment = delta_jones(params.rotation_step, phase_x, phase_y)
    return ChannelState(
        jones=increment @ state.jones,
        step_index=state.step_index + 1,
        rotation=state.rotation + params.rotation_step,
        phase_x=state.phase_x + phase_x,
        phase_y=state.phase_y + phase_y,
    )


def evolve_channel(
    state: ChannelState, params: ChannelParams, rng: numpy.random.Generator, n_steps: int
) -> ChannelTrajectory:
    """
    Runs n_steps of step_channel at once, returning the Jones matrix after every step
    The increments are combined with a parallel prefix product; the random draws are the same
    as n_steps consecutive calls of step_channel.
    :param state: Starting state
    :param params: Channel parameters
    :param rng: Source of the phase random-walk increments
    :param n_steps: Number of symbols to advance
    :return: Trajectory whose k-th matrix is the channel seen by the k-th symbol
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be positive, got {n_steps}")
    phases = rng.normal(0.0, params.phase_drift_std, size=(n_steps, 2))
    products = delta_jones(params.rotation_step, phases[:, 0], phases[:, 1])
    span = 1
    while span < n_steps:
        products[span:] = products[span:] @ products[:-span]
        span *= 2
    jones = products @ state.jones
    totals = phases.sum(axis=0)
    final_state = ChannelState(
        jones=jones[-1],
        step_index=state.step_index + n_steps,
        rotation=state.rotation + n_steps * params.rotation_step,
        phase_x=state.phase_x + totals[0],
        phase_y=state.phase_y + totals[1],
    )
    return ChannelTrajectory(jones=jones, final_state=final_state)
