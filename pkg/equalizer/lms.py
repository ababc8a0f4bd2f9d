"""Single-tap 2x2 LMS MIMO equalizer driven by known training symbols"""

# External imports
import dataclasses
import typing
import numpy

# Local imports
from linalg2 import CMat2, CVec2, IDENTITY, adjoint, as_cvec2
from .errors import DivergenceError


@dataclasses.dataclass(frozen=True)
class EqualizerState:
    """Tap matrix W (the applied transfer is W†), step size and update count"""

    taps: CMat2
    mu: float = 1e-3
    updates: int = 0

    def __post_init__(self) -> None:
        if self.mu < 0:
            raise ValueError(f"mu must be nonnegative, got {self.mu}")

    @classmethod
    def initial(cls, mu: float = 1e-3) -> "EqualizerState":
        """Cold start with W = I"""
        return cls(taps=IDENTITY.copy(), mu=mu)


@dataclasses.dataclass(frozen=True)
class TrainingBurst:
    """Outcome of a run of training updates"""

    state: EqualizerState
    errors: CVec2
    taps: typing.Optional[CMat2] = None


def lms_update(
    eq: EqualizerState, s_in: CVec2, desired: CVec2
) -> typing.Tuple[EqualizerState, CVec2, CVec2]:
    """
    One LMS step: S_out = W† S_in, e = D - S_out, W' = W + mu S_in e†
    :param eq: Current equalizer
    :param s_in: Received training symbol
    :param desired: The known transmitted training symbol
    :return: Updated equalizer, the output before the update, the error
    """
    with numpy.errstate(over="ignore", invalid="ignore"):
        s_out = adjoint(eq.taps) @ s_in
        error = desired - s_out
        taps = eq.taps + eq.mu * numpy.outer(s_in, numpy.conj(error))
    if not numpy.all(numpy.isfinite(taps)):
        raise DivergenceError(eq.updates + 1)
    return EqualizerState(taps=taps, mu=eq.mu, updates=eq.updates + 1), s_out, error


def apply_equalizer(eq: EqualizerState, s_in: CVec2) -> CVec2:
    """
    Frozen-tap output W† S_in for one symbol or a (n, 2) stack
    :param eq: Equalizer, unchanged
    :param s_in: Received symbols
    :return: Equalized symbols
    """
    return as_cvec2(s_in) @ numpy.conj(eq.taps)


def effective_matrix(eq: EqualizerState) -> CMat2:
    """W† laid out as [[w_XX, w_YX], [w_XY, w_YY]], acting on S_in from the left"""
    return adjoint(eq.taps)


def train_equalizer(
    eq: EqualizerState, s_in: CVec2, desired: CVec2, record_taps: bool = False
) -> TrainingBurst:
    """
    Runs lms_update over a training burst in slot order
    :param eq: Starting equalizer
    :param s_in: (n, 2) received training symbols
    :param desired: (n, 2) transmitted training symbols
    :param record_taps: Keep W after every update
    :return: Final state, per-update errors and optionally the tap history
    """
    errors = numpy.empty((len(s_in), 2), dtype=complex)
    history = numpy.empty((len(s_in), 2, 2), dtype=complex) if record_taps else None
    for position, (symbol, target) in enumerate(zip(s_in, desired)):
        eq, _, errors[position] = lms_update(eq, symbol, target)
        if history is not None:
            history[position] = eq.taps
    return TrainingBurst(state=eq, errors=errors, taps=history)
