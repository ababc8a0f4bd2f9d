"""Tests for the LMS MIMO equalizer"""

# External imports
import numpy
import numpy.testing
import pytest

# Local imports
from channel import ChannelParams, ChannelState, evolve_channel, propagate, rotation
from equalizer import (
    DivergenceError,
    EqualizerState,
    apply_equalizer,
    effective_matrix,
    lms_update,
    tap_trace_frame,
    taps_from_trace,
    train_equalizer,
)
from linalg2 import IDENTITY
from txrx import ModulationParams, gen_quantum_symbols, gen_training_symbols

# Module level constants
LOSS_4DB = 10 ** (-0.4)


def _static_training(rng, jones, count):
    """Known training symbols and their noisy reception through a fixed Jones matrix"""
    desired = gen_training_symbols(count, ModulationParams(), rng)
    return propagate(jones, desired, ChannelParams(), rng), desired


class TestUpdateRule:
    """Hand-checkable LMS steps"""

    def test_zero_step_size(self):
        state = EqualizerState(taps=numpy.array([[1, 2j], [0.5, 1]], dtype=complex), mu=0.0)
        updated, s_out, _ = lms_update(state, numpy.array([1.0, 1j]), numpy.array([0.0, 3.0]))
        numpy.testing.assert_array_equal(updated.taps, state.taps)
        numpy.testing.assert_allclose(s_out, state.taps.conj().T @ numpy.array([1.0, 1j]))
        assert updated.updates == 1

    def test_fixed_point(self):
        state = EqualizerState.initial(mu=0.1)
        updated, _, error = lms_update(state, numpy.array([1.0, 0.0]), numpy.array([1.0, 0.0]))
        numpy.testing.assert_array_equal(error, 0.0)
        numpy.testing.assert_array_equal(updated.taps, IDENTITY)

    def test_hand_arithmetic(self):
        state = EqualizerState.initial(mu=0.1)
        updated, _, error = lms_update(state, numpy.array([1.0, 0.0]), numpy.array([0.5, 0.0]))
        numpy.testing.assert_allclose(error, [-0.5, 0.0])
        numpy.testing.assert_allclose(updated.taps, [[0.95, 0.0], [0.0, 1.0]])
        numpy.testing.assert_allclose(effective_matrix(updated), [[0.95, 0.0], [0.0, 1.0]])

    def test_negative_step_rejected(self):
        with pytest.raises(ValueError):
            EqualizerState.initial(mu=-1.0)

    def test_divergence_carries_step(self, rng):
        s_in, desired = _static_training(rng, IDENTITY, 2000)
        with pytest.raises(DivergenceError) as caught:
            train_equalizer(EqualizerState.initial(mu=1.0), s_in, desired)
        assert 1 < caught.value.step_index <= 2000


class TestApply:
    """Frozen-tap output"""

    def test_identity(self, rng):
        symbols = rng.normal(size=(10, 2)) + 1j * rng.normal(size=(10, 2))
        numpy.testing.assert_allclose(apply_equalizer(EqualizerState.initial(), symbols), symbols)

    def test_swap(self):
        swap = numpy.array([[0, 1], [1, 0]], dtype=complex)
        state = EqualizerState(taps=swap.conj().T)
        numpy.testing.assert_allclose(apply_equalizer(state, numpy.array([1.0, 2j])), [2j, 1.0])

    @pytest.mark.parametrize("transmittance", [1.0, LOSS_4DB])
    def test_noise_floor_after_convergence(self, rng, transmittance):
        jones = numpy.sqrt(transmittance) * rotation(0.7)
        s_in, desired = _static_training(rng, jones, 3000)
        burst = train_equalizer(EqualizerState.initial(mu=1e-4), s_in, desired)
        quantum = gen_quantum_symbols(20000, ModulationParams(), rng)
        output = apply_equalizer(burst.state, propagate(jones, quantum, ChannelParams(), rng))
        per_pol = numpy.mean(numpy.abs(output - quantum) ** 2, axis=0)
        numpy.testing.assert_allclose(per_pol, 2 / transmittance, rtol=0.05)


class TestConvergence:
    """Wiener solution, transient and tracking"""

    def test_inverts_channel(self, rng):
        jones = numpy.sqrt(LOSS_4DB) * rotation(1.1) @ numpy.diag([1.0, numpy.exp(0.5j)])
        s_in, desired = _static_training(rng, jones, 3000)
        burst = train_equalizer(EqualizerState.initial(mu=1e-4), s_in, desired)
        numpy.testing.assert_allclose(effective_matrix(burst.state) @ jones, IDENTITY, atol=0.05)

    def test_mse_non_increasing_after_transient(self):
        jones = numpy.sqrt(LOSS_4DB) * rotation(0.4)
        windows = []
        for seed in range(20):
            rng = numpy.random.default_rng(seed)
            s_in, desired = _static_training(rng, jones, 2000)
            burst = train_equalizer(EqualizerState.initial(mu=1e-4), s_in, desired)
            squared = numpy.sum(numpy.abs(burst.errors) ** 2, axis=1)
            windows.append(squared.reshape(10, 200).mean(axis=1))
        mean_windows = numpy.mean(windows, axis=0)
        assert mean_windows[0] > 10 * mean_windows[-1]
        assert numpy.all(mean_windows[1:] <= 1.1 * mean_windows[:-1])

    def test_tracks_rotating_channel(self):
        mse = {}
        for speed in (0.0, 2000.0):
            rng = numpy.random.default_rng(5)
            params = ChannelParams(rotation_speed=speed, attenuation_db=4.0)
            state = ChannelState(jones=numpy.sqrt(LOSS_4DB) * rotation(0.3))
            trajectory = evolve_channel(state, params, rng, 200 * 1000)
            training_slots = (numpy.arange(200)[:, None] * 1000 + numpy.arange(100)).ravel()
            desired = gen_training_symbols(len(training_slots), ModulationParams(), rng)
            s_in = propagate(trajectory.jones[training_slots], desired, params, rng)
            burst = train_equalizer(EqualizerState.initial(mu=1e-4), s_in, desired)
            mse[speed] = numpy.mean(numpy.sum(numpy.abs(burst.errors[-10000:]) ** 2, axis=1))
        assert mse[2000.0] < 2 * mse[0.0]


def test_tap_trace_round_trip(rng):
    s_in, desired = _static_training(rng, IDENTITY, 50)
    burst = train_equalizer(EqualizerState.initial(mu=1e-4), s_in, desired, record_taps=True)
    trace = tap_trace_frame(burst.taps)
    assert list(trace.columns) == [
        "update_index",
        "w11_re", "w11_im", "w12_re", "w12_im", "w21_re", "w21_im", "w22_re", "w22_im",
    ]  # fmt: skip
    indices, taps = taps_from_trace(trace)
    numpy.testing.assert_array_equal(indices, numpy.arange(1, 51))
    numpy.testing.assert_array_equal(taps, burst.taps)
    numpy.testing.assert_array_equal(taps[-1], burst.state.taps)
