import json

import pytest

from core.config import ScenarioConfig, load_config
from core.errors import ConfigError
from core.pilot import AttackKind


def test_defaults_are_the_los_geometry():
    """Test the default scenario"""
    cfg = ScenarioConfig()
    assert cfg.geometry.num_antennas == 8
    assert cfg.pilot.length == 8
    assert cfg.channel.ue_angle_deg == 70.0
    assert cfg.channel.ed_angle_deg == 20.0
    assert cfg.bs_noise_var == 0.0


def test_snr_sets_basestation_noise():
    """Test the SNR to noise variance conversion"""
    cfg = ScenarioConfig.from_dict({"pilot": {"symbol_energy": 2.0}, "noise": {"snr_db": 10.0}})
    assert cfg.bs_noise_var == pytest.approx(0.2)


def test_attack_spec_uses_decibels_over_symbol_energy():
    """Test the jamming power conversion from dB"""
    cfg = ScenarioConfig.from_dict({"attack": {"kind": "gaussian_jam", "jam_power_db": 30.0}})
    spec = cfg.attack_spec()
    assert spec.kind is AttackKind.GAUSSIAN_JAM
    assert spec.jam_power == pytest.approx(1000.0)


def test_dict_round_trip():
    """Test the config dict round trip"""
    cfg = ScenarioConfig.from_dict({
        "name": "rt",
        "channel": {"model": "stochastic", "stochastic": {"num_paths": 4}},
        "noise": {"snr_db": 15.0},
        "estimator": "ls",
        "tolerance": {"rel_rank_tol": 1e-10},
    })
    again = ScenarioConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg
    assert again.channel.stochastic.num_paths == 4


@pytest.mark.parametrize("data, field", [
    ({"bogus": 1}, "bogus"),
    ({"channel": {"stochastic": {"paths": 3}}}, "channel.stochastic.paths"),
    ({"geometry": {"num_antennas": 0}}, "geometry.num_antennas"),
    ({"estimator": "mmse"}, "estimator"),
    ({"attack": {"kind": "laser"}}, "attack.kind"),
    ({"attack": {"kind": "pilot_replay", "replay_scale": 0.5}}, "attack.replay_scale"),
    ({"num_trials": 0}, "num_trials"),
    ({"channel": {"model": "quadriga"}}, "channel.model"),
    ({"pilot": 8}, "pilot"),
])
def test_invalid_configs_name_their_field(data, field):
    """Test that invalid values name the offending field"""
    with pytest.raises(ConfigError) as exc:
        ScenarioConfig.from_dict(data)
    assert exc.value.field == field


def test_bad_tolerance_is_a_config_error():
    """Test that a negative tolerance is a config error"""
    with pytest.raises(ConfigError):
        ScenarioConfig.from_dict({"tolerance": {"rel_rank_tol": -1}})


def test_with_overrides_validates():
    """Test that overrides are validated"""
    cfg = ScenarioConfig()
    assert cfg.with_overrides(master_seed=5).master_seed == 5
    with pytest.raises(ConfigError):
        cfg.with_overrides(num_trials=-2)


@pytest.mark.parametrize("name", [
    "los_passive_ls", "los_active_ls", "los_active_villain", "stochastic_villain", "stochastic_ls",
])
def test_shipped_configs_load(config_path, name):
    """Test that every shipped config loads"""
    cfg = load_config(config_path(name))
    assert cfg.name == name.replace("_", "-")


def test_load_config_errors(tmp_path):
    """Test config loading failures"""
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(str(broken))
