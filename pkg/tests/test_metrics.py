import math

import numpy as np
import pytest

from core.errors import BothZero, CollinearChannels
from core.metrics import (
    advantage,
    beam_pattern,
    constrained_optimum_oracle,
    default_angle_grid,
    delivered_power_theory,
    secrecy_positive,
)
from core.numerics import orth_projector
from core.precode import Precoder, mrt
from utils.rng import complex_normal


def test_passive_los_advantage(los_pair):
    """Test the passive LoS advantage"""
    h, j = los_pair
    adv = advantage(h, j, mrt(np.asarray(h), 1.0))
    assert adv.delta_db == pytest.approx(16.7, abs=0.1)
    direct = 1.0 / abs(np.asarray(j) @ np.asarray(h).conj()) ** 2
    assert adv.delta_db == pytest.approx(10 * np.log10(direct), abs=1e-9)
    assert not adv.is_infinite


def test_advantage_is_infinite_when_eavesdropper_is_nulled():
    """Test the +inf advantage marker"""
    h = np.array([1.0, 0.0])
    j = np.array([0.0, 1.0])
    adv = advantage(h, j, Precoder(np.array([1.0, 0.0])))
    assert adv.is_infinite
    assert math.isinf(adv.delta_db) and adv.delta_db > 0


def test_advantage_is_minus_infinite_when_ue_is_nulled():
    """Test the -inf advantage"""
    h = np.array([1.0, 0.0])
    j = np.array([0.0, 1.0])
    adv = advantage(h, j, Precoder(np.array([0.0, 1.0])))
    assert adv.delta_db == -math.inf


def test_advantage_with_nobody_listening():
    """Test the error when neither receiver gets power"""
    h = np.array([1.0, 0.0, 0.0])
    j = np.array([0.0, 1.0, 0.0])
    with pytest.raises(BothZero):
        advantage(h, j, Precoder(np.array([0.0, 0.0, 1.0])))


def test_secrecy_positive():
    assert secrecy_positive(0.5)
    assert not secrecy_positive(0.0)
    assert not secrecy_positive(-3.0)
    assert secrecy_positive(math.inf)


def test_default_angle_grid():
    grid = default_angle_grid()
    assert grid[0] == 0.0 and grid[-1] == 180.0
    assert grid[1] - grid[0] == pytest.approx(0.25)


def test_beam_pattern_peaks_at_the_ue(los_pair, geom):
    """Test the MRT beam peak direction"""
    h, _ = los_pair
    pattern = beam_pattern(mrt(np.asarray(h), 1.0), geom, default_angle_grid())
    peak_angle, peak_db = max(pattern, key=lambda row: row[1])
    assert peak_angle == pytest.approx(70.0)
    assert peak_db == pytest.approx(0.0, abs=1e-9)


def test_beam_pattern_reports_exact_nulls_as_minus_infinity(geom):
    """Test that exact nulls are reported as -inf"""
    w = Precoder(np.zeros(8))
    pattern = beam_pattern(w, geom, [10.0, 90.0])
    assert all(p == -math.inf for _, p in pattern)


def test_beam_pattern_needs_angles(geom):
    with pytest.raises(ValueError):
        beam_pattern(np.ones(8) / np.sqrt(8), geom, [])


def test_delivered_power_theory(los_pair):
    """Test the zero-leakage delivered power"""
    h, j = los_pair
    h_vec, j_vec = np.asarray(h), np.asarray(j)
    leak = abs(np.vdot(j_vec, h_vec)) ** 2
    assert delivered_power_theory(h, j, 2.0) == pytest.approx(2.0 * (1.0 - leak))
    assert delivered_power_theory(h, h, 1.0) == pytest.approx(0.0, abs=1e-24)


def test_oracle_is_feasible_and_optimal(rng):
    """Test the constrained optimum against random feasible beams"""
    for _ in range(20):
        size = int(rng.choice([4, 8, 16]))
        h = complex_normal(rng, size)
        j = complex_normal(rng, size)
        w = constrained_optimum_oracle(h, j, 1.5)
        assert w.power == pytest.approx(1.5)
        assert abs(j @ w.w) <= 1e-12 * np.linalg.norm(j)
        assert abs(h @ w.w) ** 2 == pytest.approx(delivered_power_theory(h, j, 1.5), rel=1e-9)

        feasible = np.conj(orth_projector(j)) @ complex_normal(rng, (size, 2000))
        feasible *= np.sqrt(1.5) / np.linalg.norm(feasible, axis=0)
        assert np.max(np.abs(h @ feasible) ** 2) <= abs(h @ w.w) ** 2 * (1 + 1e-9)


def test_oracle_rejects_collinear_channels(los_pair):
    """Test the oracle error for collinear channels"""
    h, _ = los_pair
    with pytest.raises(CollinearChannels):
        constrained_optimum_oracle(h, 2.0 * np.asarray(h), 1.0)


def test_advantage_ignores_positive_rescaling(rng):
    """Test that scaling the precoder leaves the advantage unchanged"""
    for _ in range(20):
        h = complex_normal(rng, 8)
        j = complex_normal(rng, 8)
        w = mrt(h, 1.0).w
        base = advantage(h, j, w).delta_db
        for c in (1e-3, 0.5, 7.0, 1e4):
            assert advantage(h, j, c * w).delta_db == pytest.approx(base, abs=1e-12)
