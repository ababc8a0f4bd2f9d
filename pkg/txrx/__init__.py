"""Specifies the top level functions which provide txrx package access"""
from .symbols import ModulationParams, gen_quantum_symbols, gen_training_symbols
from .frames import (
    QUANTUM,
    TRAINING,
    FrameLayout,
    SymbolFrame,
    build_frames,
    disassemble_frames,
    symbol_log_frame,
)
