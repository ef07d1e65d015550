import numpy as np
import pytest

from hfce.observation import Observation, PilotConfig, observe, sigma_for_snr

from conftest import crandn


def test_noiseless_unit_pilot(rng):
    h = crandn(rng, 16)
    np.testing.assert_array_equal(observe(h, PilotConfig(1, 0.0), 0).y, h)


def test_noiseless_pilot_scaling(rng):
    h = crandn(rng, 16)
    np.testing.assert_allclose(observe(h, PilotConfig(4, 0.0), 0).y, 2 * h, rtol=0, atol=0)


@pytest.mark.parametrize("tau", [1, 4, 16])
def test_normalized_recovers_h_bit_exact(rng, tau):
    h = crandn(rng, 32)
    np.testing.assert_array_equal(observe(h, PilotConfig(tau, 0.0), 1).normalized(), h)


def test_noise_variance_monte_carlo():
    h = np.zeros(10_000, dtype=complex)
    var = 0.37
    n = observe(h, PilotConfig(1, var), 7).y
    assert np.mean(np.abs(n) ** 2) == pytest.approx(var, rel=0.05)


def test_noise_circularly_symmetric():
    n = observe(np.zeros(20_000, dtype=complex), PilotConfig(1, 1.0), 3).y
    pseudo = np.mean(n * n)
    stderr = np.std(n * n) / np.sqrt(n.size)
    assert abs(pseudo) < 3 * stderr * np.sqrt(2)


def test_seed_reproducible(rng):
    h = crandn(rng, 8)
    a = observe(h, PilotConfig(2, 0.5), 99).y
    b = observe(h, PilotConfig(2, 0.5), 99).y
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, observe(h, PilotConfig(2, 0.5), 100).y)


@pytest.mark.parametrize("snr,tau,power,expected", [(0, 1, 1, 1.0), (10, 1, 1, 0.1), (0, 4, 0.5, 2.0)])
def test_sigma_for_snr(snr, tau, power, expected):
    assert sigma_for_snr(snr, tau, power) == pytest.approx(expected, rel=1e-15)


def test_sigma_for_snr_rejects_nonpositive_power():
    with pytest.raises(ValueError):
        sigma_for_snr(10, 1, 0.0)


@pytest.mark.parametrize("kwargs", [dict(pilot_length=0), dict(noise_variance=-1.0)])
def test_pilot_validation(kwargs):
    with pytest.raises(ValueError):
        PilotConfig(**kwargs)


def test_observation_length():
    assert Observation(np.zeros(5, complex), PilotConfig()).n_antennas == 5
