"""Specifies the top level functions which provide channel package access"""
from .jones import (
    ChannelParams,
    ChannelState,
    ChannelTrajectory,
    delta_jones,
    evolve_channel,
    make_channel,
    rotation,
    step_channel,
    transmittance_at,
)
from .measurement import propagate, transmit
from .trace import channel_trace_frame
