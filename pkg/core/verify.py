"""Built-in property checks behind the ``verify`` command.

Each check prints a PASS/FAIL line; the run fails if any check fails.
"""

import cmath
import math
import time
from dataclasses import dataclass, field
from typing import List

import numpy as np

from core.config import AttackConfig, ScenarioConfig
from core.estimate import villain_estimate, villain_objective
from core.harness import run_trial, simulate_link
from core.metrics import (
    advantage,
    beam_pattern,
    constrained_optimum_oracle,
    default_angle_grid,
    delivered_power_theory,
)
from core.numerics import orth_projector, pinv_row, top_left_singular_vector
from core.pilot import PilotSequence, synthesize_pilot_rx
from core.precode import mrt
from utils.console import print_header, print_section
from utils.error_logger import ErrorLogger
from utils.rng import complex_normal

error_logger = ErrorLogger(__name__)

# Zero-leakage and optimality thresholds
LEAKAGE_BOUND = 1e-20
ADVANTAGE_FLOOR_DB = 150.0
REL_TOL = 1e-9


@dataclass
class VerifyReport:
    passed: List[str] = field(default_factory=list)
    failed: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed


def _cross_check_passive_db(spacing: float, num_antennas: int, ue_deg: float, ed_deg: float) -> float:
    """1 / |g(ed)^T g(ue)^*|^2 in dB, summed element by element."""
    total = 0j
    for n in range(num_antennas):
        phase_ed = -2 * math.pi * spacing * math.cos(math.radians(ed_deg)) * n
        phase_ue = -2 * math.pi * spacing * math.cos(math.radians(ue_deg)) * n
        total += cmath.exp(1j * (phase_ed - phase_ue))
    return -10 * math.log10(abs(total / num_antennas) ** 2)


class Verifier:
    def __init__(self, quick: bool = False, seed: int = 2024):
        self.quick = quick
        self.seed = seed
        self.report = VerifyReport()

    def check(self, name: str, condition: bool, detail: str = "") -> bool:
        if condition:
            print(f"  PASS  {name}" + (f" ({detail})" if detail else ""))
            self.report.passed.append(name)
        else:
            print(f"  FAIL  {name}: {detail}")
            self.report.failed.append(name)
            error_logger.log_warning("Verification check failed: %s (%s)", name, detail)
        return bool(condition)

    def check_passive_los(self):
        print_section("Passive eavesdropper, line of sight")
        cfg = ScenarioConfig(name="verify-passive-ls", estimator="ls")
        metrics = run_trial(cfg, 0)
        expected = _cross_check_passive_db(0.5, 8, 70.0, 20.0)
        self.check(
            "LS advantage is 16.7 dB",
            metrics.delta_db is not None and abs(metrics.delta_db - 16.7) <= 0.1,
            f"delta={metrics.delta_db} dB",
        )
        self.check(
            "LS advantage matches the element-wise cross-check",
            metrics.delta_db is not None and abs(metrics.delta_db - expected) <= 1e-9,
            f"cross-check={expected:.6f} dB",
        )
        villain = run_trial(cfg.with_overrides(estimator="villain"), 0)
        self.check(
            "VILLAIN falls back to the LS estimate without an attack",
            villain.degenerate_flag and abs(villain.delta_db - metrics.delta_db) <= 1e-9,
            f"delta={villain.delta_db} dB",
        )
        pattern = beam_pattern(simulate_link(cfg, 0).precoder, cfg.geometry, default_angle_grid())
        peak = max(pattern, key=lambda row: row[1])[0]
        self.check("LS beam peaks at the UE", abs(peak - 70.0) <= 0.25, f"peak at {peak} deg")

    def check_zero_leakage(self):
        print_section("Gaussian jamming, noiseless VILLAIN")
        trials = 50 if self.quick else 1000
        cfg = ScenarioConfig(
            name="verify-active-villain",
            attack=AttackConfig(kind="gaussian_jam", jam_power_db=25.0),
            estimator="villain",
            master_seed=self.seed,
        )
        worst_leak = 0.0
        worst_delta = math.inf
        failures = 0
        for index in range(trials):
            metrics = run_trial(cfg, index)
            if metrics.failed:
                failures += 1
                continue
            worst_leak = max(worst_leak, metrics.ed_power / cfg.power_budget)
            worst_delta = min(worst_delta, metrics.delta_db)
        self.check(f"{trials} trials run without errors", failures == 0, f"{failures} failed")
        self.check(
            "eavesdropper power below 1e-20 P",
            worst_leak <= LEAKAGE_BOUND,
            f"worst |j^T w|^2 / P = {worst_leak:.3e}",
        )
        self.check(
            "advantage above 150 dB or infinite",
            worst_delta >= ADVANTAGE_FLOOR_DB,
            f"worst delta = {worst_delta} dB",
        )
        pattern = beam_pattern(simulate_link(cfg, 0).precoder, cfg.geometry, default_angle_grid())
        peak = max(pattern, key=lambda row: row[1])[0]
        self.check("VILLAIN beam peaks at the UE", abs(peak - 70.0) <= 0.25, f"peak at {peak} deg")

    def check_optimality(self):
        print_section("Projected-channel optimality on random instances")
        rng = np.random.default_rng(self.seed)
        instances = 100 if self.quick else 1000
        searched = 2 if self.quick else 20
        candidates = 10_000 if self.quick else 100_000
        power = 1.0

        worst_estimate = 0.0
        worst_power = 0.0
        worst_leak = 0.0
        worst_gain = 0.0
        worst_objective = 0.0
        for k in range(instances):
            num_antennas = int(rng.choice([4, 8, 16]))
            length = int(rng.choice([2, 4, 8]))
            h = complex_normal(rng, num_antennas)
            j = complex_normal(rng, num_antennas)
            pilot = PilotSequence(complex_normal(rng, length))
            z = complex_normal(rng, length, 10.0)
            phase = synthesize_pilot_rx(h, j, pilot, z, 0.0, rng)
            estimate = villain_estimate(phase)
            projected_h = orth_projector(j) @ h
            norm_h = np.linalg.norm(h)
            worst_estimate = max(worst_estimate, np.linalg.norm(estimate.h_hat - projected_h) / norm_h)

            w = mrt(estimate, power)
            adv = advantage(h, j, w)
            theory = delivered_power_theory(h, j, power)
            worst_power = max(worst_power, abs(adv.ue_power - theory) / theory)
            worst_leak = max(worst_leak, adv.ed_power / (power * np.vdot(j, j).real))

            # The joint minimiser beats the identity projector with the LS estimate
            ls_value = villain_objective(phase, None, phase.Y @ pinv_row(pilot))
            villain_value = villain_objective(phase, estimate.projector, estimate.h_hat)
            worst_objective = max(worst_objective, (villain_value - ls_value) / max(ls_value, 1e-300))

            if k < searched:
                oracle = constrained_optimum_oracle(h, j, power)
                best = abs(h @ oracle.w) ** 2
                feasible_basis = np.conj(orth_projector(j))
                for start in range(0, candidates, 10_000):
                    count = min(10_000, candidates - start)
                    v = complex_normal(rng, (num_antennas, count))
                    cand = feasible_basis @ v
                    cand *= np.sqrt(power) / np.linalg.norm(cand, axis=0)
                    gains = np.abs(h @ cand) ** 2
                    worst_gain = max(worst_gain, float(gains.max() - best) / best)

        self.check(
            f"VILLAIN estimate equals (I - j j^+) h on {instances} instances",
            worst_estimate <= REL_TOL,
            f"worst relative error {worst_estimate:.3e}",
        )
        self.check(
            "delivered UE power equals P ||(I - j j^+) h||^2",
            worst_power <= REL_TOL,
            f"worst relative error {worst_power:.3e}",
        )
        self.check(
            "MRT on the VILLAIN estimate leaks nothing",
            worst_leak <= LEAKAGE_BOUND,
            f"worst |j^T w|^2 / (P ||j||^2) = {worst_leak:.3e}",
        )
        self.check(
            "VILLAIN objective never exceeds the LS objective",
            worst_objective <= REL_TOL,
            f"worst relative excess {worst_objective:.3e}",
        )
        self.check(
            f"random search ({searched} x {candidates}) never beats the closed form",
            worst_gain <= REL_TOL,
            f"worst relative gain {worst_gain:.3e}",
        )

    def check_numerics(self):
        print_section("Linear-algebra primitives")
        rng = np.random.default_rng(self.seed + 1)
        rounds = 20 if self.quick else 200
        worst_herm = worst_idem = worst_annih = worst_pinv = worst_svd = 0.0
        for _ in range(rounds):
            size = int(rng.integers(2, 17))
            a = complex_normal(rng, size)
            p = orth_projector(a)
            worst_herm = max(worst_herm, np.linalg.norm(p - p.conj().T))
            worst_idem = max(worst_idem, np.linalg.norm(p @ p - p))
            worst_annih = max(worst_annih, np.linalg.norm(p @ a) / np.linalg.norm(a))
            worst_pinv = max(worst_pinv, abs(a @ pinv_row(a) - 1.0))

            m = complex_normal(rng, (size, int(rng.integers(1, 9))))
            u, sigma = top_left_singular_vector(m)
            eigvals, eigvecs = np.linalg.eigh(m @ m.conj().T)
            gram_u = eigvecs[:, -1]
            align = 1.0 - abs(np.vdot(gram_u, u))
            worst_svd = max(worst_svd, align, abs(sigma**2 - eigvals[-1]) / eigvals[-1])

        self.check("projector is Hermitian", worst_herm <= 1e-12, f"{worst_herm:.3e}")
        self.check("projector is idempotent", worst_idem <= 1e-12, f"{worst_idem:.3e}")
        self.check("projector annihilates its axis", worst_annih <= 1e-12, f"{worst_annih:.3e}")
        self.check("s^T pinv(s^T) = 1", worst_pinv <= 1e-12, f"{worst_pinv:.3e}")
        self.check("SVD agrees with the Gram eigendecomposition", worst_svd <= REL_TOL, f"{worst_svd:.3e}")

    def run(self) -> VerifyReport:
        start = time.time()
        print_header("VILLAIN property checks" + (" (quick)" if self.quick else ""))
        self.check_passive_los()
        self.check_zero_leakage()
        self.check_optimality()
        self.check_numerics()
        print_header("Verification Summary")
        print(f"Duration: {time.time() - start:.2f} seconds")
        print(f"Passed: {len(self.report.passed)}  Failed: {len(self.report.failed)}")
        print(f"Status: {'PASSED' if self.report.ok else 'FAILED'}")
        return self.report


def run_verification(quick: bool = False, seed: int = 2024) -> VerifyReport:
    return Verifier(quick=quick, seed=seed).run()
