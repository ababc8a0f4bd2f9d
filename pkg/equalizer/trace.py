"""Tap trace export and import"""

# External imports
import typing
import numpy
import pandas

# Local imports
from linalg2 import CMat2

# Module level constants
TAP_NAMES = ["w11", "w12", "w21", "w22"]


def tap_trace_frame(taps: CMat2, first_update: int = 1) -> pandas.DataFrame:
    """
    Tabulates a tap history for the tap trace CSV
    :param taps: (n, 2, 2) stored tap matrices W, one per update
    :param first_update: Update index of the first row
    :return: update_index and re/im of the four entries of W
    """
    flat = taps.reshape(len(taps), 4)
    columns: typing.Dict[str, numpy.ndarray] = {
        "update_index": first_update + numpy.arange(len(taps))
    }
    for position, name in enumerate(TAP_NAMES):
        columns[f"{name}_re"] = flat[:, position].real
        columns[f"{name}_im"] = flat[:, position].imag
    return pandas.DataFrame(columns)


def taps_from_trace(trace: pandas.DataFrame) -> typing.Tuple[numpy.ndarray, CMat2]:
    """
    Inverse of tap_trace_frame
    :param trace: A tap trace table, typically read back from CSV
    :return: Update indices and the (n, 2, 2) tap stack
    """
    flat = numpy.stack(
        [
            trace[f"{name}_re"].to_numpy() + 1j * trace[f"{name}_im"].to_numpy()
            for name in TAP_NAMES
        ],
        axis=1,
    )
    return trace["update_index"].to_numpy(), flat.reshape(len(trace), 2, 2)
