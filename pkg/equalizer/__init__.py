"""Specifies the top level functions which provide equalizer package access"""
from .errors import DivergenceError
from .lms import (
    EqualizerState,
    TrainingBurst,
    apply_equalizer,
    effective_matrix,
    lms_update,
    train_equalizer,
)
from .trace import tap_trace_frame, taps_from_trace
