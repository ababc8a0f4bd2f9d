"""Exceptions raised while configuring and running scenarios"""

# External imports
import typing


class ConfigError(ValueError):
    """Raised for unknown, mistyped or invalid configuration entries"""


class ScenarioError(RuntimeError):
    """Raised when a scenario cannot produce a result; the module error is kept as __cause__"""

    def __init__(self, message: str, trial_index: typing.Optional[int] = None) -> None:
        prefix = "" if trial_index is None else f"Trial {trial_index}: "
        super().__init__(prefix + message)
        self.trial_index: typing.Optional[int] = trial_index
