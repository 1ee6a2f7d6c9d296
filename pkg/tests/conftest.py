import pytest
import os
import sys

import numpy as np

# Add the parent directory to the Python path so we can import our app modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.channel import UlaGeometry, los_steering  # noqa: E402
from core.config import AttackConfig, ScenarioConfig  # noqa: E402

CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "configs")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte Carlo campaigns (deselect with -m 'not slow')")


@pytest.fixture(autouse=True)
def no_log_file(monkeypatch):
    """Keep CLI runs from writing simulation.log into the working directory"""
    monkeypatch.setenv("VILLAIN_LOG_FILE", "")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def geom():
    return UlaGeometry(num_antennas=8, spacing_wavelengths=0.5)


@pytest.fixture
def los_pair(geom):
    """UE at 70 degrees and eavesdropper at 20 degrees"""
    return los_steering(geom, 70.0, role="ue"), los_steering(geom, 20.0, role="ed")


@pytest.fixture
def passive_cfg():
    return ScenarioConfig(name="passive-ls", estimator="ls")


@pytest.fixture
def jam_cfg():
    return ScenarioConfig(
        name="active-villain",
        attack=AttackConfig(kind="gaussian_jam", jam_power_db=25.0),
        estimator="villain",
        master_seed=11,
    )


@pytest.fixture
def config_path():
    def _path(name):
        return os.path.join(CONFIG_DIR, f"{name}.json")
    return _path
