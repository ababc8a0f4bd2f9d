"""Specifies the top level functions which provide harness package access"""
from .artifacts import ArtifactHandle
from .config import (
    EqualizerSettings,
    Fig4Settings,
    KeyRateSettings,
    RateCurveSettings,
    RunSettings,
    ScenarioConfig,
    config_from_dict,
    config_schema,
    config_to_dict,
    dump_config,
    list_presets,
    load_config,
    resolve_output_dir,
)
from .errors import ConfigError, ScenarioError
from .pipeline import (
    STATUS_DIVERGED,
    STATUS_OK,
    FrameStatistics,
    TrialResult,
    replay_trial,
    run_trial,
    trial_streams,
)
from .scenarios import (
    POOLED,
    RunReport,
    key_rate_params,
    run_audit,
    run_fig4,
    run_ratecurve,
    run_scenario,
)
