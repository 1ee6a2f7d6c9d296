import json

import numpy as np
import pandas as pd
import pytest

from core.errors import ConfigError
from core.main import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main, parse_grid, parse_snr_list


def test_parse_grid():
    """Test the start:stop:step angle grid parser"""
    grid = parse_grid("0:180:0.25")
    assert len(grid) == 721
    assert grid[-1] == pytest.approx(180.0)
    np.testing.assert_allclose(parse_grid("60:80:10"), [60.0, 70.0, 80.0])
    with pytest.raises(ConfigError):
        parse_grid("0:10")
    with pytest.raises(ConfigError):
        parse_grid("10:0:1")


def test_parse_snr_list():
    """Test the SNR list parser and its inf entry"""
    assert parse_snr_list("0, 15,30") == [0.0, 15.0, 30.0]
    assert parse_snr_list("inf") == [None]
    with pytest.raises(ConfigError):
        parse_snr_list("loud")


def test_scenario_command_writes_csv(config_path, tmp_path, capsys):
    """Test the scenario command end to end"""
    out = tmp_path / "passive.csv"
    code = main(["scenario", "--config", config_path("los_passive_ls"), "--out", str(out)])
    assert code == EXIT_OK
    frame = pd.read_csv(out)
    assert frame.loc[0, "delta_db"] == pytest.approx(16.7, abs=0.1)
    assert "Median delta" in capsys.readouterr().out


def test_scenario_overrides_seed_and_trials(config_path, tmp_path):
    """Test the --seed and --trials overrides"""
    out = tmp_path / "active.json"
    code = main([
        "scenario", "--config", config_path("los_active_villain"),
        "--seed", "4", "--trials", "3", "--format", "json", "--out", str(out),
    ])
    assert code == EXIT_OK
    data = json.loads(out.read_text())
    assert data["config"]["master_seed"] == 4
    assert len(data["trials"]) == 3


def test_invalid_config_exits_with_one(tmp_path):
    """Test the exit code for bad or missing configs"""
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"estimator": "mmse"}))
    assert main(["scenario", "--config", str(bad)]) == EXIT_CONFIG
    assert main(["scenario", "--config", str(tmp_path / "missing.json")]) == EXIT_CONFIG


def test_runtime_failure_exits_with_two(tmp_path):
    """Test the exit code for a failed link"""
    collinear = tmp_path / "collinear.json"
    collinear.write_text(json.dumps({
        "channel": {"ue_angle_deg": 40.0, "ed_angle_deg": 40.0},
        "attack": {"kind": "gaussian_jam"},
    }))
    assert main(["beam-pattern", "--config", str(collinear), "--out", str(tmp_path / "b.csv")]) == EXIT_RUNTIME


def test_unwritable_output_exits_with_two(config_path, tmp_path):
    """Test the exit code for an unwritable results path"""
    blocker = tmp_path / "blocker"
    blocker.write_text("x")
    code = main(["scenario", "--config", config_path("los_passive_ls"), "--out", str(blocker / "x.csv")])
    assert code == EXIT_RUNTIME


def test_beam_pattern_command(config_path, tmp_path):
    """Test the beam-pattern command output"""
    out = tmp_path / "beam.csv"
    code = main(["beam-pattern", "--config", config_path("los_passive_ls"), "--grid", "0:180:1", "--out", str(out)])
    assert code == EXIT_OK
    frame = pd.read_csv(out)
    assert len(frame) == 181
    assert frame.loc[frame["power_db"].idxmax(), "angle_deg"] == pytest.approx(70.0)


def test_cdf_command_sweeps_snr(config_path, tmp_path):
    """Test the cdf command over an SNR and estimator sweep"""
    out = tmp_path / "cdf.csv"
    code = main([
        "cdf", "--config", config_path("stochastic_villain"), "--trials", "10",
        "--snr-db", "0,30", "--estimators", "ls,villain", "--out", str(out),
    ])
    assert code == EXIT_OK
    frame = pd.read_csv(out)
    assert set(frame["estimator"]) == {"ls", "villain"}
    assert len(frame) <= 40


def test_cdf_rejects_unknown_estimator(config_path, tmp_path):
    """Test that an unknown estimator is a config error"""
    code = main([
        "cdf", "--config", config_path("los_active_ls"), "--trials", "2",
        "--estimators", "mmse", "--out", str(tmp_path / "cdf.csv"),
    ])
    assert code == EXIT_CONFIG


def test_zero_jobs_is_a_config_error(config_path):
    assert main(["scenario", "--config", config_path("los_passive_ls"), "--jobs", "0"]) == EXIT_CONFIG


def test_quick_verify_passes(capsys):
    """Test that the quick verify suite passes"""
    assert main(["verify", "--quick"]) == EXIT_OK
    output = capsys.readouterr().out
    assert "FAIL " not in output
    assert "Status: PASSED" in output
