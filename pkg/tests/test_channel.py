"""Tests for the Jones channel and the received-symbol abstraction"""

# External imports
import numpy
import numpy.testing
import pytest

# Local imports
from channel import (
    ChannelParams,
    ChannelState,
    channel_trace_frame,
    delta_jones,
    evolve_channel,
    make_channel,
    propagate,
    rotation,
    step_channel,
    transmit,
    transmittance_at,
)
from linalg2 import IDENTITY, adjoint, is_unitary, svd2


class TestParams:
    """Validation and derived quantities"""

    def test_rejects_negative_pdl(self):
        with pytest.raises(ValueError):
            ChannelParams(pdl_db=-1.0)

    def test_rejects_zero_symbol_rate(self):
        with pytest.raises(ValueError):
            ChannelParams(symbol_rate=0.0)

    def test_rotation_step(self):
        assert ChannelParams(rotation_speed=2000.0, symbol_rate=500e6).rotation_step == (
            pytest.approx(4e-6)
        )


class TestMakeChannel:
    """Initial Jones matrix"""

    def test_lossless_is_unitary(self, rng):
        assert is_unitary(make_channel(ChannelParams(), rng).jones)

    def test_attenuation_sets_both_singular_values(self, rng):
        state = make_channel(ChannelParams(attenuation_db=4.0), rng)
        _, sigma, _ = svd2(state.jones)
        numpy.testing.assert_allclose(sigma, 10 ** (-0.2), atol=1e-12)
        assert sigma[0] ** 2 == pytest.approx(0.398, abs=1e-3)

    def test_pdl_sets_singular_value_ratio(self, rng):
        state = make_channel(ChannelParams(attenuation_db=4.0, pdl_db=3.0), rng)
        _, sigma, _ = svd2(state.jones)
        assert sigma[1] / sigma[0] == pytest.approx(10 ** (-3 / 20), abs=1e-12)
        assert sigma[0] == pytest.approx(10 ** (-0.2), abs=1e-12)

    def test_fixed_orientation(self, rng):
        params = ChannelParams(pdl_db=3.0, pdl_orientation=numpy.pi / 4)
        state = make_channel(params, rng)
        gram = adjoint(state.jones) @ state.jones
        weak_power = 10 ** (-0.3)
        expected = (
            rotation(-numpy.pi / 4) @ numpy.diag([1.0, weak_power]) @ rotation(numpy.pi / 4)
        )
        numpy.testing.assert_allclose(gram, expected, atol=1e-12)

    def test_seeded_from_params(self):
        params = ChannelParams(pdl_db=1.0, rng_seed=7)
        numpy.testing.assert_array_equal(make_channel(params).jones, make_channel(params).jones)


class TestStepChannel:
    """Single increments and whole trajectories"""

    def test_static_channel_unchanged(self, rng):
        params = ChannelParams(rotation_speed=0.0)
        state = make_channel(ChannelParams(attenuation_db=2.0), rng)
        stepped = step_channel(state, params, rng)
        numpy.testing.assert_array_equal(stepped.jones, state.jones)
        assert stepped.step_index == 1

    def test_quarter_turn_increment(self):
        numpy.testing.assert_allclose(
            delta_jones(numpy.pi / 2, 0.0, 0.0), [[0, -1], [1, 0]], atol=1e-15
        )

    def test_increments_are_unitary(self, rng):
        increments = delta_jones(0.3, rng.normal(size=500), rng.normal(size=500))
        residual = increments @ adjoint(increments) - IDENTITY
        assert numpy.max(numpy.abs(residual)) < 1e-12

    def test_accumulated_rotation(self, rng):
        params = ChannelParams(rotation_speed=2000.0, symbol_rate=500e6)
        state = ChannelState(jones=IDENTITY)
        trajectory = evolve_channel(state, params, rng, 10**6)
        assert trajectory.final_state.rotation == pytest.approx(4.0)
        numpy.testing.assert_allclose(trajectory.jones[-1], rotation(4.0), atol=1e-9)

    def test_trajectory_matches_stepping(self):
        params = ChannelParams(
            rotation_speed=5e6, pdl_db=2.0, phase_drift_std=0.01, attenuation_db=3.0
        )
        state = make_channel(params, numpy.random.default_rng(1))
        trajectory = evolve_channel(state, params, numpy.random.default_rng(2), 37)
        stepper = numpy.random.default_rng(2)
        stepped = state
        for position in range(37):
            stepped = step_channel(stepped, params, stepper)
            numpy.testing.assert_allclose(trajectory.jones[position], stepped.jones, atol=1e-12)
        assert trajectory.final_state.step_index == stepped.step_index
        assert trajectory.final_state.phase_x == pytest.approx(stepped.phase_x)

    def test_largest_singular_value_constant(self, rng):
        params = ChannelParams(
            rotation_speed=2e5, pdl_db=3.0, phase_drift_std=1e-3, attenuation_db=4.0
        )
        trajectory = evolve_channel(make_channel(params, rng), params, rng, 5000)
        _, sigma, _ = svd2(trajectory.jones)
        numpy.testing.assert_allclose(sigma[:, 0], 10 ** (-0.2), atol=1e-9)
        numpy.testing.assert_allclose(sigma[:, 1], 10 ** (-0.2) * 10 ** (-0.15), atol=1e-9)

    def test_trace_frame_columns(self, rng):
        params = ChannelParams(attenuation_db=4.0)
        trajectory = evolve_channel(make_channel(params, rng), params, rng, 100)
        frame = channel_trace_frame(trajectory, stride=10)
        assert list(frame.columns[:3]) == ["step_index", "j11_re", "j11_im"]
        assert len(frame) == 10
        assert frame["step_index"].tolist() == list(range(1, 101, 10))
        numpy.testing.assert_allclose(frame["sv_max"], 10 ** (-0.2), atol=1e-12)


class TestTransmit:
    """Statistics of the received symbols"""

    def test_vacuum(self, rng):
        received = propagate(IDENTITY, numpy.zeros((10**5, 2)), ChannelParams(), rng)
        numpy.testing.assert_allclose(numpy.var(received.real, axis=0), 1.0, atol=0.025)
        numpy.testing.assert_allclose(numpy.var(received.imag, axis=0), 1.0, atol=0.025)

    def test_mean_propagation(self, rng):
        jones = numpy.diag([numpy.sqrt(0.5), numpy.sqrt(0.5)]).astype(complex)
        alpha = numpy.tile([1.0, 0.0], (10**5, 1))
        received = propagate(jones, alpha, ChannelParams(), rng)
        numpy.testing.assert_allclose(received.mean(axis=0), [numpy.sqrt(0.5), 0.0], atol=0.016)

    def test_single_symbol_shape(self, rng):
        state = make_channel(ChannelParams(), rng)
        assert transmit(state, numpy.array([1.0, 0.0]), ChannelParams(), rng).shape == (2,)

    def test_bob_variance_matches_closed_form(self, rng):
        transmittance, variance, excess = 0.395, 4.0, 0.15
        jones = numpy.sqrt(transmittance) * IDENTITY
        alpha = numpy.sqrt(variance - 1) * (
            rng.standard_normal((10**6, 2)) + 1j * rng.standard_normal((10**6, 2))
        )
        received = propagate(jones, alpha, ChannelParams(excess_noise=excess), rng)
        pooled = (numpy.var(received.real) + numpy.var(received.imag)) / 2
        assert pooled == pytest.approx(transmittance * (variance - 1 + excess) + 1, abs=0.01)
        assert transmittance * (variance - 1 + excess) + 1 == pytest.approx(2.244, abs=1e-3)

    def test_noise_covariance_is_diagonal(self, rng):
        params = ChannelParams(attenuation_db=3.0, pdl_db=3.0, excess_noise=0.5)
        jones = make_channel(params, rng).jones
        count = 2 * 10**5
        alpha = numpy.sqrt(3.0) * (
            rng.standard_normal((count, 2)) + 1j * rng.standard_normal((count, 2))
        )
        received = propagate(jones, alpha, params, rng)
        covariance = received.T @ received.conj() / (2 * count)
        row_gain = numpy.sum(numpy.abs(jones) ** 2, axis=1)
        expected = 3.0 * jones @ adjoint(jones) + numpy.diag(row_gain * 0.5 + 1)
        numpy.testing.assert_allclose(covariance, expected, atol=0.04)


def test_transmittance_at():
    assert transmittance_at(0.0) == pytest.approx(1.0)
    assert transmittance_at(20.0) == pytest.approx(10 ** (-0.4))
    assert transmittance_at(25.3, 4.5 / 25.3) == pytest.approx(10 ** (-0.45))
