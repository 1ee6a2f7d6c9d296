import numpy as np
import pytest

from core.channel import (
    ChannelVector,
    StochasticChannelConfig,
    UlaGeometry,
    los_steering,
    pathloss_amplitude,
    sample_stochastic_channel,
    steering_matrix,
)
from core.errors import ConfigError, NonFiniteInput
from utils.rng import substream


def test_steering_vector_has_unit_norm(geom):
    """Test the unit gain of LoS steering vectors"""
    for phi in (0.0, 20.0, 70.0, 90.0, 133.3, 180.0):
        assert los_steering(geom, phi).gain == pytest.approx(1.0)


def test_broadside_is_in_phase(geom):
    g = np.asarray(los_steering(geom, 90.0))
    np.testing.assert_allclose(g, np.ones(8) / np.sqrt(8), atol=1e-15)


def test_steering_symmetries(geom):
    """Test the mirror and conjugate symmetries of the steering vector"""
    for phi in (10.0, 20.0, 70.0, 121.0):
        g = np.asarray(los_steering(geom, phi))
        np.testing.assert_allclose(np.asarray(los_steering(geom, -phi)), g, atol=1e-14)
        np.testing.assert_allclose(np.asarray(los_steering(geom, 180.0 - phi)), g.conj(), atol=1e-14)


def test_steering_matrix_columns_match_single_vectors(geom):
    """Test the batched steering matrix against single vectors"""
    angles = [20.0, 70.0, 150.0]
    matrix = steering_matrix(geom, angles)
    assert matrix.shape == (8, 3)
    for k, phi in enumerate(angles):
        np.testing.assert_allclose(matrix[:, k], np.asarray(los_steering(geom, phi)))


def test_steering_phase_progression():
    """Test the per-element phase step of a half-wavelength array"""
    geom = UlaGeometry(num_antennas=4, spacing_wavelengths=0.5)
    g = np.asarray(los_steering(geom, 60.0)) * 2.0
    expected = np.exp(-1j * np.pi * 0.5 * np.arange(4))
    np.testing.assert_allclose(g, expected, atol=1e-14)


def test_geometry_validation():
    """Test that bad array geometries name their field"""
    with pytest.raises(ConfigError) as exc:
        UlaGeometry(num_antennas=0)
    assert exc.value.field == "num_antennas"
    with pytest.raises(ConfigError):
        UlaGeometry(spacing_wavelengths=-0.5)


def test_channel_vector_rejects_nan():
    with pytest.raises(NonFiniteInput):
        ChannelVector(np.array([1.0, np.inf]))


def test_stochastic_config_validation():
    """Test the stochastic channel parameter checks"""
    with pytest.raises(ConfigError):
        StochasticChannelConfig(dist_min_m=50.0, dist_max_m=20.0)
    with pytest.raises(ConfigError):
        StochasticChannelConfig(num_paths=0)
    with pytest.raises(ConfigError):
        StochasticChannelConfig(sector_halfangle_deg=120.0)


def test_pathloss_at_reference_distance():
    """Test the pathloss normalisation and its 35 dB decade slope"""
    cfg = StochasticChannelConfig()
    geom = UlaGeometry(num_antennas=16)
    assert pathloss_amplitude(cfg, geom, cfg.reference_distance_m) == pytest.approx(4.0)
    near = pathloss_amplitude(cfg, geom, 10.0)
    far = pathloss_amplitude(cfg, geom, 100.0)
    assert 20 * np.log10(near / far) == pytest.approx(35.0)


def test_stochastic_channel_is_reproducible():
    """Test that a substream fixes the stochastic channel"""
    cfg = StochasticChannelConfig()
    geom = UlaGeometry(num_antennas=16)
    h1, d1 = sample_stochastic_channel(cfg, geom, substream(3, 5, "channel_ue"))
    h2, d2 = sample_stochastic_channel(cfg, geom, substream(3, 5, "channel_ue"))
    np.testing.assert_array_equal(np.asarray(h1), np.asarray(h2))
    assert d1 == d2
    h3, _ = sample_stochastic_channel(cfg, geom, substream(3, 6, "channel_ue"))
    assert not np.allclose(np.asarray(h1), np.asarray(h3))


def test_stochastic_placement_stays_in_bounds():
    """Test that placements stay in the distance and sector limits"""
    cfg = StochasticChannelConfig()
    geom = UlaGeometry(num_antennas=16)
    for trial in range(200):
        _, place = sample_stochastic_channel(cfg, geom, substream(0, trial, "channel_ed"), role="ed")
        assert cfg.dist_min_m <= place.distance_m <= cfg.dist_max_m
        assert 30.0 <= place.azimuth_deg <= 150.0
        assert len(place.path_angles_deg) == cfg.num_paths


def test_distance_override_keeps_other_draws():
    """Test that pinning the distance leaves the other draws alone"""
    cfg = StochasticChannelConfig()
    geom = UlaGeometry(num_antennas=16)
    _, free = sample_stochastic_channel(cfg, geom, substream(1, 0, "channel_ue"))
    h, pinned = sample_stochastic_channel(cfg, geom, substream(1, 0, "channel_ue"), distance_m=55.0)
    assert pinned.distance_m == 55.0
    assert pinned.azimuth_deg == free.azimuth_deg
    assert pinned.pathloss_amplitude == pytest.approx(4.0)


def test_mean_channel_power_follows_pathloss():
    """Test the average channel power at the reference distance"""
    cfg = StochasticChannelConfig()
    geom = UlaGeometry(num_antennas=16)
    powers = [
        np.vdot(h, h).real
        for h, _ in (
            sample_stochastic_channel(cfg, geom, substream(9, t, "channel_ue"), distance_m=55.0)
            for t in range(3000)
        )
    ]
    assert np.mean(powers) == pytest.approx(16.0, rel=0.1)


def test_zero_angular_spread_gives_a_single_direction():
    """Test that zero spread collapses the channel to one steering vector"""
    cfg = StochasticChannelConfig(angular_spread_deg=0.0)
    geom = UlaGeometry(num_antennas=8)
    h, place = sample_stochastic_channel(cfg, geom, substream(2, 0, "channel_ue"))
    g = np.asarray(los_steering(geom, place.azimuth_deg))
    h = np.asarray(h)
    assert abs(np.vdot(g, h)) == pytest.approx(np.linalg.norm(h))


def test_steering_is_periodic_in_angle(geom):
    """Test that steering vectors repeat every 360 degrees"""
    for phi in (-75.0, 0.0, 20.0, 70.0, 181.5):
        g = np.asarray(los_steering(geom, phi))
        np.testing.assert_allclose(np.asarray(los_steering(geom, phi + 360.0)), g, atol=1e-12)
        np.testing.assert_allclose(np.asarray(los_steering(geom, phi - 720.0)), g, atol=1e-12)


def test_independent_stochastic_draws_are_not_collinear():
    """Test that sampled UE and eavesdropper channels never share a direction"""
    cfg = StochasticChannelConfig()
    geom = UlaGeometry(num_antennas=16)
    for trial in range(1000):
        h, _ = sample_stochastic_channel(cfg, geom, substream(4, trial, "channel_ue"))
        j, _ = sample_stochastic_channel(cfg, geom, substream(4, trial, "channel_ed"), role="ed")
        h, j = np.asarray(h), np.asarray(j)
        cosine = abs(np.vdot(h, j)) / (np.linalg.norm(h) * np.linalg.norm(j))
        assert cosine < 1.0 - 1e-9
