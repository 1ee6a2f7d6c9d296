"""MRT precoding, downlink transmission and UE symbol recovery."""

from dataclasses import dataclass

import numpy as np

from core.errors import ConfigError, DegenerateLink, ZeroEstimate
from core.numerics import DEFAULT_TOLERANCE, ToleranceConfig, as_cvector
from utils.rng import complex_normal

_SQRT_HALF = np.sqrt(0.5)
_QAM16_LEVELS = np.array([-3.0, -1.0, 1.0, 3.0]) / np.sqrt(10.0)

CONSTELLATIONS = {
    "bpsk": np.array([1.0, -1.0], dtype=np.complex128),
    "qpsk": _SQRT_HALF * np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]),
    "16qam": (_QAM16_LEVELS[:, None] + 1j * _QAM16_LEVELS[None, :]).reshape(-1),
}


@dataclass(eq=False)
class Precoder:
    w: np.ndarray
    power_budget: float = 1.0

    def __post_init__(self):
        self.w = as_cvector(self.w, name="precoder")
        if not self.power_budget > 0:
            raise ConfigError("power_budget must be positive", field="power_budget")
        if np.vdot(self.w, self.w).real > self.power_budget * (1 + 1e-12):
            raise ConfigError(
                "precoder exceeds its power budget",
                field="power_budget",
                details={"power": float(np.vdot(self.w, self.w).real), "budget": self.power_budget},
            )

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.w, dtype=dtype)

    def __len__(self) -> int:
        return self.w.size

    @property
    def power(self) -> float:
        return float(np.vdot(self.w, self.w).real)


@dataclass(frozen=True)
class DownlinkObservation:
    y_ue: complex
    y_ed: complex
    symbol: complex
    ue_noise_var: float
    ed_noise_var: float
    beta: float
    s_hat: complex
    phase_rad: float


def constellation_points(name: str) -> np.ndarray:
    """Unit average energy alphabet by name (bpsk, qpsk, 16qam)."""
    try:
        return CONSTELLATIONS[name.lower()]
    except KeyError:
        raise ConfigError(
            f"Unknown constellation '{name}'", field="constellation",
            details={"choices": sorted(CONSTELLATIONS)},
        ) from None


def draw_symbol(name: str, rng: np.random.Generator) -> complex:
    points = constellation_points(name)
    return complex(points[rng.integers(points.size)])


def mrt(estimate, power_budget: float, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> Precoder:
    """Maximum ratio transmission w = sqrt(P) h_hat^* / ||h_hat||_2.

    estimate may be a ChannelEstimate or a raw vector. A ChannelEstimate is
    judged zero relative to its unprojected LS norm, a raw vector only when it
    vanishes.

    Raises:
        ZeroEstimate: If the estimate is unusable.
    """
    if not power_budget > 0:
        raise ConfigError("power_budget must be positive", field="power_budget")
    h_hat = as_cvector(estimate, name="channel estimate")
    norm = float(np.linalg.norm(h_hat))
    reference = float(getattr(estimate, "ls_norm", norm))
    if norm == 0.0 or norm <= tol.rel_rank_tol * reference:
        raise ZeroEstimate(
            "channel estimate is numerically zero",
            details={"norm": norm, "reference": reference},
        )
    w = np.sqrt(power_budget) * h_hat.conj() / norm
    return Precoder(w, power_budget)


def downlink_tx_rx(
    precoder: Precoder,
    h,
    j,
    symbol: complex,
    ue_noise_var: float,
    ed_noise_var: float,
    rng: np.random.Generator,
    tol: ToleranceConfig = DEFAULT_TOLERANCE,
) -> DownlinkObservation:
    """Send x = w s to the UE and the eavesdropper and rescale at the UE.

    beta = 1/|h^T w| is the genie gain; s_hat = beta y_ue recovers s up to the
    phase of h^T w.

    Raises:
        DegenerateLink: If |h^T w| is negligible.
    """
    w = as_cvector(precoder, name="precoder")
    h = as_cvector(h, length=w.size, name="UE channel")
    j = as_cvector(j, length=w.size, name="eavesdropper channel")
    if ue_noise_var < 0 or ed_noise_var < 0:
        raise ConfigError("noise variances must be nonnegative", field="noise")

    gain = h @ w
    scale = np.linalg.norm(w) * np.linalg.norm(h)
    if scale == 0.0 or abs(gain) <= tol.rel_rank_tol * scale:
        raise DegenerateLink("precoder delivers no signal to the UE", details={"gain": abs(gain)})

    x = w * symbol
    n_ue = complex_normal(rng, 1, ue_noise_var)[0] if ue_noise_var > 0 else 0j
    n_ed = complex_normal(rng, 1, ed_noise_var)[0] if ed_noise_var > 0 else 0j
    y_ue = complex(h @ x + n_ue)
    y_ed = complex(j @ x + n_ed)
    beta = 1.0 / abs(gain)
    return DownlinkObservation(
        y_ue=y_ue,
        y_ed=y_ed,
        symbol=complex(symbol),
        ue_noise_var=float(ue_noise_var),
        ed_noise_var=float(ed_noise_var),
        beta=float(beta),
        s_hat=complex(beta * y_ue),
        phase_rad=float(np.angle(gain)),
    )
