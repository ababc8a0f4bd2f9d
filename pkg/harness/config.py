"""Scenario configuration: strict TOML schema, presets and lossless round trips"""

# External imports
import dataclasses
import os
import pathlib
import typing
import tomli
import tomlkit

# Local imports
from channel import ChannelParams
from estimation import METHODS
from keyrate import DETECTIONS, HOMODYNE, FiniteSizeParams
from txrx import FrameLayout, ModulationParams
from .errors import ConfigError

# Module level constants
PRESET_DIRECTORY = pathlib.Path(__file__).parent / "presets"
OUTPUT_DIR_VARIABLE = "QMIMO_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "results"


@dataclasses.dataclass(frozen=True)
class EqualizerSettings:
    """LMS step size and the cold-start frames kept out of estimation"""

    mu: float = 1e-3
    warmup_frames: int = 10

    def __post_init__(self) -> None:
        if self.mu < 0:
            raise ValueError(f"mu must be nonnegative, got {self.mu}")
        if self.warmup_frames < 0:
            raise ValueError(f"warmup_frames must be nonnegative, got {self.warmup_frames}")


@dataclasses.dataclass(frozen=True)
class RunSettings:
    """Trial count, scale, seeding and output"""

    trials: int = 10
    symbols_per_trial: int = 10**6
    master_seed: int = 20231107
    methods: typing.List[str] = dataclasses.field(default_factory=lambda: list(METHODS))
    output_dir: typing.Optional[str] = None
    export_traces: bool = False
    workers: int = 1
    channel_trace_stride: int = 1000

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if self.symbols_per_trial < 1:
            raise ValueError(f"symbols_per_trial must be positive, got {self.symbols_per_trial}")
        if self.master_seed < 0:
            raise ValueError(f"master_seed must be nonnegative, got {self.master_seed}")
        unknown = [method for method in self.methods if method not in METHODS]
        if unknown or not self.methods:
            raise ValueError(f"methods must be a nonempty subset of {METHODS}, got {self.methods}")
        if self.workers == 0:
            raise ValueError("workers must be nonzero; use -1 for one worker per core")
        if self.channel_trace_stride < 1:
            raise ValueError(
                f"channel_trace_stride must be positive, got {self.channel_trace_stride}"
            )


@dataclasses.dataclass(frozen=True)
class KeyRateSettings:
    """Protocol and detector parameters applied to the estimated channel"""

    beta: float = 0.96
    f_rep: float = 500e6
    eta_d: float = 1.0
    v_el: float = 0.0
    detection: str = HOMODYNE
    finite_size: typing.Optional[FiniteSizeParams] = None

    def __post_init__(self) -> None:
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if self.f_rep <= 0:
            raise ValueError(f"f_rep must be positive, got {self.f_rep}")
        if not 0 < self.eta_d <= 1:
            raise ValueError(f"eta_d must lie in (0, 1], got {self.eta_d}")
        if self.v_el < 0:
            raise ValueError(f"v_el must be nonnegative, got {self.v_el}")
        if self.detection not in DETECTIONS:
            raise ValueError(f"detection must be one of {DETECTIONS}, got {self.detection}")


@dataclasses.dataclass(frozen=True)
class Fig4Settings:
    """PDL values swept by the singular value traces and the row decimation of the trace files"""

    pdl_sweep: typing.List[float] = dataclasses.field(default_factory=lambda: [0.0, 1.0, 3.0])
    stride: int = 10

    def __post_init__(self) -> None:
        if self.stride < 1:
            raise ValueError(f"stride must be positive, got {self.stride}")


@dataclasses.dataclass(frozen=True)
class RateCurveSettings:
    """Distance grid and the per-polarization excess noise of each method's curve"""

    distances_km: typing.List[float] = dataclasses.field(
        default_factory=lambda: [5.0 * step for step in range(21)]
    )
    loss_db_per_km: float = 0.2
    c_mimo_eps: typing.List[float] = dataclasses.field(default_factory=lambda: [0.117, 0.118])
    q_mimo_eps: typing.List[float] = dataclasses.field(default_factory=lambda: [0.151, 0.148])
    markers: typing.List[typing.List[float]] = dataclasses.field(default_factory=list)
    from_scenario: bool = False

    def __post_init__(self) -> None:
        for name in ("c_mimo_eps", "q_mimo_eps"):
            if len(getattr(self, name)) != 2:
                raise ValueError(f"{name} needs one value per polarization")
        if any(len(marker) != 2 for marker in self.markers):
            raise ValueError("markers are [distance_km, T] pairs")


@dataclasses.dataclass(frozen=True)
class ScenarioConfig:
    """Every section of a scenario file"""

    channel: ChannelParams = dataclasses.field(default_factory=ChannelParams)
    modulation: ModulationParams = dataclasses.field(default_factory=ModulationParams)
    equalizer: EqualizerSettings = dataclasses.field(default_factory=EqualizerSettings)
    frames: FrameLayout = dataclasses.field(default_factory=FrameLayout)
    run: RunSettings = dataclasses.field(default_factory=RunSettings)
    keyrate: KeyRateSettings = dataclasses.field(default_factory=KeyRateSettings)
    fig4: Fig4Settings = dataclasses.field(default_factory=Fig4Settings)
    ratecurve: RateCurveSettings = dataclasses.field(default_factory=RateCurveSettings)

    def __post_init__(self) -> None:
        if self.modulation.v_a <= 1:
            raise ValueError(f"Scenarios need v_a above 1, got {self.modulation.v_a}")


def _type_name(annotation: typing.Any) -> str:
    """Readable name of a schema type"""
    origin = typing.get_origin(annotation)
    if origin is typing.Union:
        inner = [arg for arg in typing.get_args(annotation) if arg is not type(None)]
        return f"optional {_type_name(inner[0])}"
    if origin is list:
        return f"list of {_type_name(typing.get_args(annotation)[0])}"
    if dataclasses.is_dataclass(annotation):
        return "table"
    return annotation.__name__


def _coerce(value: typing.Any, annotation: typing.Any, path: str) -> typing.Any:
    """Checks a TOML value against a schema type, widening int to float"""
    origin = typing.get_origin(annotation)
    if origin is typing.Union:
        inner = [arg for arg in typing.get_args(annotation) if arg is not type(None)]
        return _coerce(value, inner[0], path)
    if origin is list:
        if not isinstance(value, list):
            raise ConfigError(f"{path} must be a {_type_name(annotation)}")
        element = typing.get_args(annotation)[0]
        return [_coerce(item, element, f"{path}[{index}]") for index, item in enumerate(value)]
    if dataclasses.is_dataclass(annotation):
        if not isinstance(value, dict):
            raise ConfigError(f"{path} must be a table")
        return _build_section(annotation, value, path)
    if annotation is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if annotation is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    if annotation in (str, bool) and isinstance(value, annotation):
        return value
    raise ConfigError(f"{path} must be a {_type_name(annotation)}, got {value!r}")


def _build_section(cls: typing.Any, table: typing.Dict[str, typing.Any], path: str) -> typing.Any:
    """Instantiates a section dataclass from its table, rejecting unknown keys"""
    hints = typing.get_type_hints(cls)
    known = {field.name for field in dataclasses.fields(cls)}
    unknown = sorted(set(table) - known)
    if unknown:
        raise ConfigError(f"Unknown key {path}.{unknown[0]}")
    values = {key: _coerce(value, hints[key], f"{path}.{key}") for key, value in table.items()}
    try:
        return cls(**values)
    except ValueError as error:
        raise ConfigError(f"Invalid [{path}]: {error}") from error


def config_from_dict(document: typing.Dict[str, typing.Any]) -> ScenarioConfig:
    """
    Builds a validated configuration from a parsed TOML document
    :param document: Section name to table
    :return: The configuration
    """
    hints = typing.get_type_hints(ScenarioConfig)
    unknown = sorted(set(document) - set(hints))
    if unknown:
        raise ConfigError(f"Unknown section [{unknown[0]}]")
    sections = {name: _coerce(table, hints[name], name) for name, table in document.items()}
    try:
        return ScenarioConfig(**sections)
    except ValueError as error:
        raise ConfigError(str(error)) from error


def _plain(value: typing.Any) -> typing.Any:
    """Dataclasses to tables, dropping unset optional keys"""
    if dataclasses.is_dataclass(value):
        return {
            field.name: _plain(getattr(value, field.name))
            for field in dataclasses.fields(value)
            if getattr(value, field.name) is not None
        }
    if isinstance(value, list):
        return [_plain(item) for item in value]
    return value


def config_to_dict(config: ScenarioConfig) -> typing.Dict[str, typing.Any]:
    """JSON-compatible form of a configuration, the inverse of config_from_dict"""
    return _plain(config)


def load_config(source: typing.Union[str, pathlib.Path]) -> ScenarioConfig:
    """
    Reads a scenario file, or a shipped preset by name
    :param source: Path to a TOML file or the name of a preset
    :return: The configuration
    """
    path = pathlib.Path(source)
    if not path.is_file():
        preset = PRESET_DIRECTORY / f"{source}.toml"
        if not preset.is_file():
            presets = ", ".join(list_presets())
            raise ConfigError(f"{source} is neither a file nor a preset ({presets})")
        path = preset
    with open(path, "rb") as handle:
        try:
            document = tomli.load(handle)
        except tomli.TOMLDecodeError as error:
            raise ConfigError(f"{path} is not valid TOML: {error}") from error
    return config_from_dict(document)


def dump_config(config: ScenarioConfig, path: typing.Union[str, pathlib.Path]) -> None:
    """Writes a configuration as TOML that load_config reads back unchanged"""
    pathlib.Path(path).write_text(tomlkit.dumps(config_to_dict(config)), encoding="utf-8")


def list_presets() -> typing.List[str]:
    """Names of the shipped presets"""
    return sorted(path.stem for path in PRESET_DIRECTORY.glob("*.toml"))


def config_schema() -> typing.Dict[str, typing.Dict[str, typing.Dict[str, typing.Any]]]:
    """
    Publishes every section and key with its type and default
    :return: section -> key -> {"type", "default"}, JSON compatible
    """
    schema: typing.Dict[str, typing.Dict[str, typing.Dict[str, typing.Any]]] = {}
    defaults = ScenarioConfig()
    sections = {field.name: getattr(defaults, field.name) for field in dataclasses.fields(defaults)}
    sections["keyrate.finite_size"] = FiniteSizeParams()
    for name, section in sections.items():
        hints = typing.get_type_hints(type(section))
        schema[name] = {
            field.name: {
                "type": _type_name(hints[field.name]),
                "default": _plain(getattr(section, field.name)),
            }
            for field in dataclasses.fields(section)
        }
    return schema


def resolve_output_dir(config: ScenarioConfig) -> pathlib.Path:
    """The configured output directory, else QMIMO_OUTPUT_DIR, else ./results"""
    if config.run.output_dir is not None:
        return pathlib.Path(config.run.output_dir)
    return pathlib.Path(os.environ.get(OUTPUT_DIR_VARIABLE, DEFAULT_OUTPUT_DIR))
