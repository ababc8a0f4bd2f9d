"""Specifies the top level functions which provide estimation package access"""
from .errors import ConsistencyError, InsufficientDataError, UndefinedEstimateError
from .estimators import (
    CMIMO,
    METHODS,
    MIN_BLOCK_SYMBOLS,
    POLARIZATIONS,
    QMIMO,
    ChannelEstimate,
    CovarianceBlocks,
    build_covariance,
    estimate_channel,
    estimate_excess_noise,
    estimate_transmittance,
    estimation_report_frame,
    estimation_rows,
    predict_underestimation,
    synthetic_block,
)
from .moments import BlockMoments, PairedBlock
