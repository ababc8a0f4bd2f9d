"""Time-division multiplexing of training and quantum symbols into frames"""

# External imports
import dataclasses
import typing
import numpy
import pandas

# Local imports
from linalg2 import CVec2

# Module level constants
TRAINING = "training"
QUANTUM = "quantum"


@dataclasses.dataclass(frozen=True)
class FrameLayout:
    """Training slots followed by quantum slots, repeated every frame"""

    n_train: int = 100
    n_quantum: int = 900

    def __post_init__(self) -> None:
        if self.n_train < 0:
            raise ValueError(f"n_train must be nonnegative, got {self.n_train}")
        if self.n_quantum < 1:
            raise ValueError(f"n_quantum must be positive, got {self.n_quantum}")

    @property
    def period(self) -> int:
        """Symbols per full frame"""
        return self.n_train + self.n_quantum

    @property
    def overhead(self) -> float:
        """Fraction of slots spent on training"""
        return self.n_train / self.period

    @property
    def equalizer_enabled(self) -> bool:
        """Without training slots the receiver runs with a fixed identity equalizer"""
        return self.n_train > 0


@dataclasses.dataclass(frozen=True)
class SymbolFrame:
    """One frame: its training burst then its quantum symbols"""

    index: int
    training: CVec2
    quantum: CVec2
    layout: FrameLayout
    partial: bool = False

    @property
    def size(self) -> int:
        """Symbols in this frame"""
        return len(self.training) + len(self.quantum)

    @property
    def symbols(self) -> CVec2:
        """All symbols in slot order"""
        return numpy.concatenate([self.training, self.quantum])

    @property
    def slot_kinds(self) -> numpy.ndarray:
        """Slot kind per symbol in slot order"""
        return numpy.array([TRAINING] * len(self.training) + [QUANTUM] * len(self.quantum))


def build_frames(
    quantum: CVec2, training: CVec2, layout: FrameLayout
) -> typing.List[SymbolFrame]:
    """
    Interleaves training and quantum symbols per the layout until both inputs are exhausted
    A frame that runs short of either kind is kept and flagged partial.
    :param quantum: (n, 2) quantum symbols
    :param training: (m, 2) training symbols, empty when the layout has no training slots
    :param layout: Slots per frame
    :return: Frames in transmission order
    """
    if not layout.equalizer_enabled and len(training) > 0:
        raise ValueError("Training symbols supplied to a layout without training slots")
    frames: typing.List[SymbolFrame] = []
    quantum_index = training_index = 0
    while quantum_index < len(quantum) or training_index < len(training):
        training_block = training[training_index : training_index + layout.n_train]
        quantum_block = quantum[quantum_index : quantum_index + layout.n_quantum]
        training_index += len(training_block)
        quantum_index += len(quantum_block)
        frames.append(
            SymbolFrame(
                index=len(frames),
                training=training_block,
                quantum=quantum_block,
                layout=layout,
                partial=(
                    len(training_block) < layout.n_train
                    or len(quantum_block) < layout.n_quantum
                ),
            )
        )
    return frames


def disassemble_frames(frames: typing.List[SymbolFrame]) -> typing.Tuple[CVec2, CVec2]:
    """
    Inverse of build_frames
    :param frames: Frames in transmission order
    :return: The quantum and the training symbols
    """
    empty = numpy.zeros((0, 2), dtype=complex)
    quantum = numpy.concatenate([empty] + [frame.quantum for frame in frames])
    training = numpy.concatenate([empty] + [frame.training for frame in frames])
    return quantum, training


def symbol_log_frame(frames: typing.List[SymbolFrame]) -> pandas.DataFrame:
    """
    Tabulates the transmitted stream for the symbol log CSV
    :param frames: Frames in transmission order
    :return: index, slot_kind, ax_re, ax_im, ay_re, ay_im
    """
    symbols = numpy.concatenate([frame.symbols for frame in frames])
    return pandas.DataFrame(
        {
            "index": numpy.arange(len(symbols)),
            "slot_kind": numpy.concatenate([frame.slot_kinds for frame in frames]),
            "ax_re": symbols[:, 0].real,
            "ax_im": symbols[:, 0].imag,
            "ay_re": symbols[:, 1].real,
            "ay_im": symbols[:, 1].imag,
        }
    )
