"""The received-symbol abstraction: S_in = J alpha + excess noise + vacuum noise, in SNU"""

# External imports
import numpy

# Local imports
from linalg2 import CMat2, CVec2, as_cvec2, unit_quadrature_noise
from .jones import ChannelParams, ChannelState


def propagate(
    jones: CMat2, alpha: CVec2, params: ChannelParams, rng: numpy.random.Generator
) -> CVec2:
    """
    Passes symbols through the channel and adds the output-referred noise
    Each output quadrature gets excess noise of variance T_pol * eps, T_pol being the squared
    norm of that output's row of J, plus unit vacuum noise. Excess noise is drawn first.
    :param jones: One Jones matrix, or one per symbol with shape (n, 2, 2)
    :param alpha: Transmitted amplitudes, (2,) or (n, 2)
    :param params: Channel parameters supplying eps
    :param rng: Noise generator
    :return: Received amplitudes with the broadcast shape of the inputs
    """
    alpha = as_cvec2(alpha)
    signal = numpy.einsum("...ij,...j->...i", jones, alpha)
    row_gain = numpy.broadcast_to(numpy.sum(numpy.abs(jones) ** 2, axis=-1), signal.shape)
    excess = numpy.sqrt(row_gain * params.excess_noise) * unit_quadrature_noise(
        rng, signal.shape
    )
    return signal + excess + unit_quadrature_noise(rng, signal.shape)


def transmit(
    state: ChannelState, alpha_A: CVec2, params: ChannelParams, rng: numpy.random.Generator
) -> CVec2:
    """Single-state form of propagate"""
    return propagate(state.jones, alpha_A, params, rng)
