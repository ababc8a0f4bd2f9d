"""Specifies the top level functions which provide keyrate package access"""
from .entropy import (
    entropy_g,
    holevo_bound,
    holevo_cross_check,
    holevo_eigenvalues,
    mutual_information,
    symplectic_holevo_bound,
    symplectic_spectrum,
)
from .errors import InvalidSplitError, NumericalDomainError
from .params import (
    DETECTIONS,
    HETERODYNE,
    HOMODYNE,
    POLICIES,
    POLICY_BOTH,
    POLICY_EXCESS_NOISE,
    FiniteSizeParams,
    KeyRateParams,
    KeyRateResult,
)
from .rates import (
    FIBRE_LOSS_DB_PER_KM,
    delta_n,
    key_rate,
    key_rate_asymptotic,
    key_rate_finite,
    optimal_modulation,
    rate_curve,
    rate_curve_frame,
    worst_case_parameters,
)
