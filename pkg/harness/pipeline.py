"""One seeded trial: generate, transmit, equalize, correct and accumulate estimation moments"""

# External imports
import dataclasses
import logging
import math
import typing
import numpy
import pandas

# Local imports
from channel import channel_trace_frame, evolve_channel, make_channel, propagate
from equalizer import (
    DivergenceError,
    EqualizerState,
    effective_matrix,
    tap_trace_frame,
    taps_from_trace,
    train_equalizer,
)
from estimation import (
    CMIMO,
    METHODS,
    QMIMO,
    BlockMoments,
    ChannelEstimate,
    estimate_channel,
    estimation_rows,
)
from linalg2 import CMat2, CVec2
from qmimo import NoiseCorrection, apply_cmimo, correction_audit_frame, normalize_w, qmimo_apply
from txrx import (
    QUANTUM,
    TRAINING,
    SymbolFrame,
    build_frames,
    gen_quantum_symbols,
    gen_training_symbols,
    symbol_log_frame,
)
from .artifacts import ArtifactHandle
from .config import ScenarioConfig
from .errors import ScenarioError

logger = logging.getLogger(__name__)

# Module level constants
CHANNEL_STREAM = 0
NOISE_STREAM = 1
TRANSMITTER_STREAM = 2
RECEIVER_STREAM = 3
STATUS_OK = "ok"
STATUS_DIVERGED = "diverged"


@dataclasses.dataclass(frozen=True)
class TrialStreams:
    """Independent generators of one trial, each a function of (master_seed, trial_index)"""

    channel: numpy.random.Generator
    noise: numpy.random.Generator
    transmitter: numpy.random.Generator
    receiver: numpy.random.Generator


def trial_streams(master_seed: int, trial_index: int) -> TrialStreams:
    """
    Derives the four generators of a trial without reference to any other trial
    :param master_seed: Scenario seed
    :param trial_index: Zero-based trial number
    :return: Channel, noise, transmitter and receiver generators
    """

    def stream(stream_id: int) -> numpy.random.Generator:
        sequence = numpy.random.SeedSequence(
            entropy=master_seed, spawn_key=(trial_index, stream_id)
        )
        return numpy.random.default_rng(sequence)

    return TrialStreams(
        channel=stream(CHANNEL_STREAM),
        noise=stream(NOISE_STREAM),
        transmitter=stream(TRANSMITTER_STREAM),
        receiver=stream(RECEIVER_STREAM),
    )


@dataclasses.dataclass(frozen=True)
class FrameStatistics:
    """Moments of the estimation frames per data path, with the added noise they carried"""

    moments: typing.Dict[str, BlockMoments]
    added_variance: numpy.ndarray
    frames_used: int
    corrections: typing.List[NoiseCorrection] = dataclasses.field(default_factory=list)
    frame_indices: typing.List[int] = dataclasses.field(default_factory=list)

    @classmethod
    def empty(cls) -> "FrameStatistics":
        """Statistics of no frames"""
        return cls(
            moments={method: BlockMoments() for method in METHODS},
            added_variance=numpy.zeros(2),
            frames_used=0,
        )

    def merge(self, other: "FrameStatistics") -> "FrameStatistics":
        """Pools two disjoint sets of frames; the per-frame corrections are not carried"""
        return FrameStatistics(
            moments={method: self.moments[method] + other.moments[method] for method in METHODS},
            added_variance=self.added_variance + other.added_variance,
            frames_used=self.frames_used + other.frames_used,
        )

    @property
    def mean_added_variance(self) -> numpy.ndarray:
        """Time-averaged (V_XX, V_YY) over the estimation frames"""
        return self.added_variance / max(self.frames_used, 1)


@dataclasses.dataclass(frozen=True)
class TrialResult:
    """Outcome of one trial; a diverged trial carries no statistics"""

    trial_index: int
    status: str
    statistics: FrameStatistics
    divergence_step: typing.Optional[int] = None
    taps: typing.Optional[CMat2] = None

    @property
    def frames_used(self) -> int:
        """Frames that entered estimation"""
        return self.statistics.frames_used


def frame_offsets(frames: typing.Sequence[SymbolFrame]) -> numpy.ndarray:
    """Stream position of the first slot of every frame"""
    sizes = [frame.size for frame in frames]
    return numpy.concatenate([[0], numpy.cumsum(sizes)[:-1]]).astype(int)


def process_frames(
    config: ScenarioConfig,
    frames: typing.Sequence[SymbolFrame],
    received: CVec2,
    frozen: typing.Sequence[EqualizerState],
    rng: numpy.random.Generator,
) -> FrameStatistics:
    """
    Applies each frame's frozen equalizer to its quantum slots through both data paths
    Warm-up and partial frames are processed but left out of the moments.
    :param config: Scenario configuration
    :param frames: Frames in transmission order
    :param received: Received stream S_in, one row per slot
    :param frozen: Equalizer state at the end of each frame's training burst
    :param rng: Receiver generator for the trusted noise
    :return: Pooled moments, summed (V_XX, V_YY) and the per-frame corrections
    """
    moments = {method: BlockMoments() for method in METHODS}
    added_variance = numpy.zeros(2)
    frames_used = 0
    corrections: typing.List[NoiseCorrection] = []
    frame_indices: typing.List[int] = []
    for frame, start, eq in zip(frames, frame_offsets(frames), frozen):
        if len(frame.quantum) == 0:
            continue
        begin = start + len(frame.training)
        s_in = received[begin : begin + len(frame.quantum)]
        nc = normalize_w(effective_matrix(eq))
        classic = apply_cmimo(nc, s_in)
        quantum = qmimo_apply(nc, s_in, rng)
        corrections.append(nc)
        frame_indices.append(frame.index)
        if frame.partial or frame.index < config.equalizer.warmup_frames:
            continue
        moments[CMIMO] += BlockMoments.from_arrays(frame.quantum, classic)
        moments[QMIMO] += BlockMoments.from_arrays(frame.quantum, quantum)
        added_variance += [nc.v_xx, nc.v_yy]
        frames_used += 1
    return FrameStatistics(moments, added_variance, frames_used, corrections, frame_indices)


def _train_frames(
    config: ScenarioConfig,
    frames: typing.Sequence[SymbolFrame],
    received: CVec2,
    record_taps: bool,
) -> typing.Tuple[typing.List[EqualizerState], typing.Optional[CMat2]]:
    """Runs the LMS over every training burst, freezing the taps for each frame's quantum slots"""
    eq = EqualizerState.initial(config.equalizer.mu)
    frozen, history = [], []
    for frame, start in zip(frames, frame_offsets(frames)):
        if len(frame.training):
            burst = train_equalizer(
                eq, received[start : start + len(frame.training)], frame.training, record_taps
            )
            eq = burst.state
            if burst.taps is not None:
                history.append(burst.taps)
        frozen.append(eq)
    taps = numpy.concatenate(history) if history else None
    return frozen, taps


def frozen_from_taps(
    config: ScenarioConfig, frames: typing.Sequence[SymbolFrame], taps: CMat2
) -> typing.List[EqualizerState]:
    """
    Rebuilds each frame's frozen equalizer from a full tap history
    :param config: Scenario configuration
    :param frames: Frames in transmission order
    :param taps: W after every update, (n_updates, 2, 2)
    :return: One state per frame, the taps after its last training update
    """
    current = EqualizerState.initial(config.equalizer.mu)
    frozen, done = [], 0
    for frame in frames:
        done += len(frame.training)
        if done > len(taps):
            raise ValueError(f"Tap history holds {len(taps)} updates, frames need {done}")
        if len(frame.training):
            current = EqualizerState(taps=taps[done - 1], mu=config.equalizer.mu, updates=done)
        frozen.append(current)
    return frozen


def received_log_frame(received: CVec2) -> pandas.DataFrame:
    """
    Tabulates the received stream for the received-symbol CSV
    :param received: (n, 2) S_in in slot order
    :return: index, sx_re, sx_im, sy_re, sy_im
    """
    return pandas.DataFrame(
        {
            "index": numpy.arange(len(received)),
            "sx_re": received[:, 0].real,
            "sx_im": received[:, 0].imag,
            "sy_re": received[:, 1].real,
            "sy_im": received[:, 1].imag,
        }
    )


def received_from_log(log: pandas.DataFrame) -> CVec2:
    """Inverse of received_log_frame"""
    return numpy.stack(
        [
            log["sx_re"].to_numpy() + 1j * log["sx_im"].to_numpy(),
            log["sy_re"].to_numpy() + 1j * log["sy_im"].to_numpy(),
        ],
        axis=1,
    )


def frames_from_log(config: ScenarioConfig, log: pandas.DataFrame) -> typing.List[SymbolFrame]:
    """Rebuilds the transmitted frames from a symbol log"""
    symbols = numpy.stack(
        [
            log["ax_re"].to_numpy() + 1j * log["ax_im"].to_numpy(),
            log["ay_re"].to_numpy() + 1j * log["ay_im"].to_numpy(),
        ],
        axis=1,
    )
    kinds = log["slot_kind"].to_numpy()
    return build_frames(symbols[kinds == QUANTUM], symbols[kinds == TRAINING], config.frames)


def generate_frames(
    config: ScenarioConfig, rng: numpy.random.Generator
) -> typing.List[SymbolFrame]:
    """
    Draws a trial's quantum symbols and as many training bursts as the layout needs
    :param config: Scenario configuration
    :param rng: Transmitter generator
    :return: Frames in transmission order
    """
    layout = config.frames
    count = config.run.symbols_per_trial
    quantum = gen_quantum_symbols(count, config.modulation, rng)
    if layout.equalizer_enabled:
        bursts = math.ceil(count / layout.n_quantum)
        training = gen_training_symbols(bursts * layout.n_train, config.modulation, rng)
    else:
        training = numpy.zeros((0, 2), dtype=complex)
    return build_frames(quantum, training, layout)


def run_trial(
    config: ScenarioConfig,
    trial_index: int,
    record_taps: bool = False,
    export: typing.Optional[ArtifactHandle] = None,
) -> TrialResult:
    """
    Executes one trial end to end
    Equalizer divergence ends the trial and is recorded in the result; other module errors are
    raised as ScenarioError naming the trial.
    :param config: Scenario configuration
    :param trial_index: Zero-based trial number, selects the random streams
    :param record_taps: Keep the tap matrix after every LMS update
    :param export: Handle receiving the trial's trace CSVs, or None
    :return: The trial's moments, status and optional tap history
    """
    streams = trial_streams(config.run.master_seed, trial_index)
    try:
        frames = generate_frames(config, streams.transmitter)
        stream = numpy.concatenate([frame.symbols for frame in frames])
        channel_rng = None if config.channel.rng_seed is not None else streams.channel
        state = make_channel(config.channel, channel_rng)
        trajectory = evolve_channel(state, config.channel, streams.channel, len(stream))
        received = propagate(trajectory.jones, stream, config.channel, streams.noise)
        try:
            frozen, taps = _train_frames(
                config, frames, received, record_taps or export is not None
            )
        except DivergenceError as error:
            logger.error("Trial %d diverged at LMS update %d", trial_index, error.step_index)
            return TrialResult(
                trial_index=trial_index,
                status=STATUS_DIVERGED,
                statistics=FrameStatistics.empty(),
                divergence_step=error.step_index,
            )
        statistics = process_frames(config, frames, received, frozen, streams.receiver)
    except (ValueError, ArithmeticError) as error:
        raise ScenarioError(str(error), trial_index) from error

    if export is not None:
        stride = config.run.channel_trace_stride
        export.write("channel_trace", channel_trace_frame(trajectory, stride=stride))
        export.write("symbols", symbol_log_frame(frames))
        export.write("received", received_log_frame(received))
        if taps is not None:
            export.write("taps", tap_trace_frame(taps))
        audit = correction_audit_frame(statistics.corrections, statistics.frame_indices)
        export.write("audit", audit)
    logger.info(
        "Trial %d finished: %d of %d frames used for estimation",
        trial_index,
        statistics.frames_used,
        len(frames),
    )
    return TrialResult(
        trial_index=trial_index,
        status=STATUS_OK,
        statistics=statistics,
        taps=taps if record_taps else None,
    )


def replay_trial(
    config: ScenarioConfig, handle: ArtifactHandle, trial_index: int
) -> FrameStatistics:
    """
    Repeats a trial's frame processing from its exported symbol, received and tap CSVs
    The receiver generator is rebuilt from the seed, so the trusted noise is redrawn exactly.
    :param config: Configuration the trial ran with
    :param handle: Handle on the trial's trace directory
    :param trial_index: Trial number the traces belong to
    :return: The same statistics the trial produced
    """
    for name in ("symbols", "received"):
        if not handle.contains(name):
            raise FileNotFoundError(f"{handle.path(name)} is missing")
    frames = frames_from_log(config, handle.read("symbols"))
    received = received_from_log(handle.read("received"))
    if config.frames.equalizer_enabled:
        if not handle.contains("taps"):
            raise FileNotFoundError(f"{handle.path('taps')} is missing")
        indices, taps = taps_from_trace(handle.read("taps"))
        if not numpy.array_equal(indices, numpy.arange(1, len(indices) + 1)):
            raise ValueError("Tap trace must hold every update in order")
    else:
        taps = numpy.zeros((0, 2, 2), dtype=complex)
    frozen = frozen_from_taps(config, frames, taps)
    rng = trial_streams(config.run.master_seed, trial_index).receiver
    return process_frames(config, frames, received, frozen, rng)


def estimate_statistics(
    config: ScenarioConfig, statistics: FrameStatistics
) -> typing.Tuple[typing.Dict[str, ChannelEstimate], numpy.ndarray]:
    """
    Estimates T' and eps_e for each configured method from pooled moments
    :param config: Scenario configuration
    :param statistics: Moments of one trial or of several pooled
    :return: Estimate per method and the predicted C-MIMO underestimation per polarization
    """
    skip_silent = not config.modulation.dual_pol
    estimates = {
        method: estimate_channel(
            statistics.moments[method], config.modulation.v_a, method, skip_silent=skip_silent
        )
        for method in METHODS
        if method in config.run.methods
    }
    quantum = estimate_channel(
        statistics.moments[QMIMO], config.modulation.v_a, QMIMO, skip_silent=skip_silent
    )
    return estimates, statistics.mean_added_variance / quantum.t_prime


def report_rows(
    block_id: typing.Union[int, str],
    estimates: typing.Dict[str, ChannelEstimate],
    delta_eps_pred: numpy.ndarray,
) -> typing.List[typing.Dict[str, typing.Any]]:
    """Estimation report rows of one block, methods in their fixed order"""
    rows = []
    for method in METHODS:
        if method in estimates:
            rows += estimation_rows(block_id, estimates[method], delta_eps_pred)
    return rows
