"""Shared pytest fixtures; living at the repository root also puts the packages on the path"""

# External imports
import numpy
import pytest


@pytest.fixture
def rng() -> numpy.random.Generator:
    """A freshly seeded generator per test"""
    return numpy.random.default_rng(20231107)


def random_cmat2(generator: numpy.random.Generator, count: int) -> numpy.ndarray:
    """Random complex matrices with entries inside the unit disk"""
    radius = numpy.sqrt(generator.uniform(0.0, 1.0, size=(count, 2, 2)))
    angle = generator.uniform(0.0, 2 * numpy.pi, size=(count, 2, 2))
    return radius * numpy.exp(1j * angle)
