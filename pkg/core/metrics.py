"""Security metrics: advantage, beam patterns and the zero-leakage optimum."""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.channel import UlaGeometry, steering_matrix
from core.errors import BothZero, CollinearChannels
from core.numerics import DEFAULT_TOLERANCE, ToleranceConfig, as_cvector, orth_projector
from core.precode import Precoder

# Relative power below which a receiver counts as receiving nothing
POWER_FLOOR = 1e-30


@dataclass(frozen=True)
class Advantage:
    """UE-to-eavesdropper power ratio in dB; math.inf is the InfMarker."""

    delta_db: float
    ue_power: float
    ed_power: float

    @property
    def is_infinite(self) -> bool:
        return bool(np.isposinf(self.delta_db))


@dataclass(frozen=True)
class TrialMetrics:
    """Per-trial record. Failed trials keep their index and error and leave the numbers empty."""

    trial_index: int
    estimator: str
    delta_db: Optional[float] = None
    ue_power: Optional[float] = None
    ed_power: Optional[float] = None
    delivered_power_theory: Optional[float] = None
    ls_omega: Optional[complex] = None
    degenerate_flag: bool = False
    secrecy_positive: Optional[bool] = None
    residual_sigma: Optional[float] = None
    symbol_error: Optional[float] = None
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def _power_budget(w) -> float:
    if isinstance(w, Precoder):
        return w.power_budget
    v = as_cvector(w, name="precoder")
    return float(np.vdot(v, v).real)


def advantage(h, j, w) -> Advantage:
    """delta = |h^T w|^2 / |j^T w|^2 in dB.

    An eavesdropper power below POWER_FLOOR * P * ||j||^2 gives +inf.

    Raises:
        BothZero: If neither receiver gets measurable power.
    """
    w_vec = as_cvector(w, name="precoder")
    h = as_cvector(h, length=w_vec.size, name="UE channel")
    j = as_cvector(j, length=w_vec.size, name="eavesdropper channel")
    budget = _power_budget(w)

    ue_power = float(abs(h @ w_vec) ** 2)
    ed_power = float(abs(j @ w_vec) ** 2)
    ue_silent = ue_power < POWER_FLOOR * budget * float(np.vdot(h, h).real)
    ed_silent = ed_power < POWER_FLOOR * budget * float(np.vdot(j, j).real)
    if ue_silent and ed_silent:
        raise BothZero(
            "precoder delivers no power to either receiver",
            details={"ue_power": ue_power, "ed_power": ed_power},
        )
    if ed_silent:
        return Advantage(delta_db=float("inf"), ue_power=ue_power, ed_power=ed_power)
    if ue_silent:
        return Advantage(delta_db=float("-inf"), ue_power=ue_power, ed_power=ed_power)
    return Advantage(
        delta_db=float(10.0 * np.log10(ue_power / ed_power)),
        ue_power=ue_power,
        ed_power=ed_power,
    )


def secrecy_positive(delta_db: float) -> bool:
    """delta > 1 (0 dB): positive secrecy capacity for this precoder when N_ue = N_ed."""
    return bool(delta_db > 0.0)


def default_angle_grid() -> np.ndarray:
    return np.linspace(0.0, 180.0, 721)


def beam_pattern(w, geom: UlaGeometry, angles_deg: Sequence[float]) -> List[Tuple[float, float]]:
    """Receive power 10 log10 |g(phi)^T w|^2 at each angle; exact nulls give -inf."""
    angles = np.atleast_1d(np.asarray(angles_deg, dtype=float))
    if angles.size == 0:
        raise ValueError("beam_pattern needs at least one angle")
    w_vec = as_cvector(w, length=geom.num_antennas, name="precoder")
    powers = np.abs(steering_matrix(geom, angles).T @ w_vec) ** 2
    with np.errstate(divide="ignore"):
        power_db = 10.0 * np.log10(powers)
    return [(float(a), float(p)) for a, p in zip(angles, power_db)]


def delivered_power_theory(h, j, power_budget: float, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> float:
    """Highest UE power reachable with zero eavesdropper power: P ||(I - j j^+) h||^2."""
    h = as_cvector(h, name="UE channel")
    projected = orth_projector(j, tol) @ h
    return float(power_budget * np.vdot(projected, projected).real)


def constrained_optimum_oracle(
    h, j, power_budget: float, tol: ToleranceConfig = DEFAULT_TOLERANCE
) -> Precoder:
    """Closed-form maximiser of |h^T w|^2 s.t. j^T w = 0 and ||w||^2 <= P.

    w = sqrt(P) (P_j h)^* / ||P_j h|| with P_j = I - j j^+.

    Raises:
        CollinearChannels: If P_j h vanishes, i.e. h lies in span(j).
    """
    h = as_cvector(h, name="UE channel")
    j = as_cvector(j, length=h.size, name="eavesdropper channel")
    projected = orth_projector(j, tol) @ h
    norm = float(np.linalg.norm(projected))
    if norm <= tol.rel_rank_tol * float(np.linalg.norm(h)) * np.sqrt(h.size):
        raise CollinearChannels(
            "UE channel lies in the eavesdropper subspace",
            details={"projected_norm": norm},
        )
    return Precoder(np.sqrt(power_budget) * projected.conj() / norm, power_budget)
