"""Per-frame audit table of the trusted-noise correction"""

# External imports
import typing
import pandas

# Local imports
from .correction import NoiseCorrection


def correction_audit_frame(
    corrections: typing.Sequence[NoiseCorrection],
    frame_indices: typing.Optional[typing.Sequence[int]] = None,
) -> pandas.DataFrame:
    """
    Tabulates the corrections applied frame by frame
    :param corrections: One correction per processed frame
    :param frame_indices: Frame index of each correction, defaults to 0, 1, ...
    :return: frame_index, omega_x, omega_y, omega_max, v_xx, v_yy, v_xy_re, v_xy_im
    """
    if frame_indices is None:
        frame_indices = range(len(corrections))
    return pandas.DataFrame(
        {
            "frame_index": list(frame_indices),
            "omega_x": [nc.omega[0] for nc in corrections],
            "omega_y": [nc.omega[1] for nc in corrections],
            "omega_max": [nc.omega_max for nc in corrections],
            "v_xx": [nc.v_xx for nc in corrections],
            "v_yy": [nc.v_yy for nc in corrections],
            "v_xy_re": [nc.v_xy.real for nc in corrections],
            "v_xy_im": [nc.v_xy.imag for nc in corrections],
        }
    )
