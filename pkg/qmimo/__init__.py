"""Specifies the top level functions which provide qmimo package access"""
from .audit import correction_audit_frame
from .correction import (
    NoiseCorrection,
    apply_cmimo,
    completion_residual,
    normalize_w,
    qmimo_apply,
    sample_trusted_noise,
    svd_noise_path,
)
from .errors import DegenerateInputError
