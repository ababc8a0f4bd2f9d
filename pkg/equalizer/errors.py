"""Exceptions raised by the adaptive equalizer"""


class DivergenceError(RuntimeError):
    """Raised when an LMS update produces non-finite taps, usually because mu is too large"""

    def __init__(self, step_index: int) -> None:
        super().__init__(f"LMS diverged at update {step_index}; reduce the step size")
        self.step_index: int = step_index
