"""Paired Alice/Bob data and its mergeable sufficient statistics"""

# External imports
import dataclasses
import typing
import numpy

# Local imports
from linalg2 import CVec2, as_cvec2


@dataclasses.dataclass(frozen=True)
class PairedBlock:
    """Quantum-slot amplitudes of Alice and the matching receiver outputs, one column per pol"""

    alice: CVec2
    bob: CVec2

    def __post_init__(self) -> None:
        alice, bob = as_cvec2(self.alice), as_cvec2(self.bob)
        if alice.ndim != 2 or alice.shape != bob.shape:
            raise ValueError(
                f"alice and bob must be matching (n, 2) stacks, got {alice.shape} and {bob.shape}"
            )
        object.__setattr__(self, "alice", alice)
        object.__setattr__(self, "bob", bob)

    def __len__(self) -> int:
        return len(self.alice)

    def quadratures(self, pol: int) -> typing.Tuple[numpy.ndarray, ...]:
        """(x_A, p_A, x_B, p_B) of one polarization"""
        return (
            self.alice[:, pol].real,
            self.alice[:, pol].imag,
            self.bob[:, pol].real,
            self.bob[:, pol].imag,
        )


@dataclasses.dataclass(frozen=True)
class BlockMoments:
    """
    Streaming sums per polarization: count, sum |a|^2, sum Re(a* b), sum |b|^2 and sum b
    Moments of disjoint blocks add, so frames, blocks and trials pool exactly.
    """

    count: int = 0
    alice_power: numpy.ndarray = dataclasses.field(default_factory=lambda: numpy.zeros(2))
    cross: numpy.ndarray = dataclasses.field(default_factory=lambda: numpy.zeros(2))
    bob_power: numpy.ndarray = dataclasses.field(default_factory=lambda: numpy.zeros(2))
    bob_sum: numpy.ndarray = dataclasses.field(
        default_factory=lambda: numpy.zeros(2, dtype=complex)
    )

    @classmethod
    def from_arrays(cls, alice: CVec2, bob: CVec2) -> "BlockMoments":
        """
        Accumulates the moments of paired (n, 2) stacks
        :param alice: Transmitted quantum amplitudes
        :param bob: Receiver outputs in the same slots
        :return: The block's moments
        """
        return cls(
            count=len(alice),
            alice_power=numpy.sum(numpy.abs(alice) ** 2, axis=0),
            cross=numpy.sum((numpy.conj(alice) * bob).real, axis=0),
            bob_power=numpy.sum(numpy.abs(bob) ** 2, axis=0),
            bob_sum=numpy.sum(bob, axis=0),
        )

    @classmethod
    def from_block(cls, block: PairedBlock) -> "BlockMoments":
        """Moments of a PairedBlock"""
        return cls.from_arrays(block.alice, block.bob)

    def merge(self, other: "BlockMoments") -> "BlockMoments":
        """Moments of the union of two disjoint blocks"""
        return BlockMoments(
            count=self.count + other.count,
            alice_power=self.alice_power + other.alice_power,
            cross=self.cross + other.cross,
            bob_power=self.bob_power + other.bob_power,
            bob_sum=self.bob_sum + other.bob_sum,
        )

    def __add__(self, other: "BlockMoments") -> "BlockMoments":
        return self.merge(other)

    @property
    def bob_variance(self) -> numpy.ndarray:
        """Pooled per-quadrature variance of Bob's data for each polarization"""
        mean = self.bob_sum / self.count
        return (self.bob_power / self.count - numpy.abs(mean) ** 2) / 2
