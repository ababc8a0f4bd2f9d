"""Channel trace export"""

# External imports
import typing
import numpy
import pandas

# Local imports
from linalg2 import svd2
from .jones import ChannelTrajectory

# Module level constants
ENTRY_NAMES = ["j11", "j12", "j21", "j22"]


def channel_trace_frame(
    trajectory: ChannelTrajectory, first_step: int = 1, stride: int = 1
) -> pandas.DataFrame:
    """
    Tabulates a trajectory for the channel trace CSV
    :param trajectory: Output of evolve_channel
    :param first_step: Step index of the trajectory's first matrix
    :param stride: Keep every stride-th step
    :return: step_index, re/im of the four entries, largest and smallest singular value
    """
    jones = trajectory.jones[::stride]
    _, sigma, _ = svd2(jones)
    flat = jones.reshape(len(jones), 4)
    columns: typing.Dict[str, numpy.ndarray] = {
        "step_index": first_step + stride * numpy.arange(len(jones))
    }
    for position, name in enumerate(ENTRY_NAMES):
        columns[f"{name}_re"] = flat[:, position].real
        columns[f"{name}_im"] = flat[:, position].imag
    columns["sv_max"] = sigma[:, 0]
    columns["sv_min"] = sigma[:, 1]
    return pandas.DataFrame(columns)
