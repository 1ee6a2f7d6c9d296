"""UE and eavesdropper channel generation.

Angles follow the ULA convention of the array response: phi is measured from
the array axis, so broadside is 90 degrees and the per-element phase is
-2*pi*d*cos(phi).
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from core.errors import ConfigError
from core.numerics import as_cvector
from utils.rng import complex_normal


@dataclass(eq=False)
class ChannelVector:
    """Downlink channel of a single-antenna node, stored as a length-B column."""

    b: np.ndarray
    role: str = "ue"

    def __post_init__(self):
        self.b = as_cvector(self.b, name=f"{self.role} channel")

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.b, dtype=dtype)

    def __len__(self) -> int:
        return self.b.size

    @property
    def gain(self) -> float:
        return float(np.linalg.norm(self.b))


@dataclass(frozen=True)
class UlaGeometry:
    num_antennas: int = 8
    spacing_wavelengths: float = 0.5

    def __post_init__(self):
        if int(self.num_antennas) != self.num_antennas or self.num_antennas < 1:
            raise ConfigError("num_antennas must be a positive integer", field="num_antennas")
        if not self.spacing_wavelengths > 0:
            raise ConfigError("spacing_wavelengths must be positive", field="spacing_wavelengths")


@dataclass(frozen=True)
class StochasticChannelConfig:
    """Clustered multipath model used in place of a 3GPP UMa generator.

    reference_gain is the per-antenna amplitude at reference_distance_m.
    """

    num_paths: int = 10
    sector_halfangle_deg: float = 60.0
    angular_spread_deg: float = 10.0
    dist_min_m: float = 10.0
    dist_max_m: float = 100.0
    pathloss_exponent: float = 3.5
    reference_gain: float = 1.0
    reference_distance_m: float = 55.0

    def __post_init__(self):
        if int(self.num_paths) != self.num_paths or self.num_paths < 1:
            raise ConfigError("num_paths must be a positive integer", field="num_paths")
        if not 0 < self.dist_min_m < self.dist_max_m:
            raise ConfigError(
                "need 0 < dist_min_m < dist_max_m", field="dist_min_m",
                details={"dist_min_m": self.dist_min_m, "dist_max_m": self.dist_max_m},
            )
        if self.angular_spread_deg < 0:
            raise ConfigError("angular_spread_deg must be nonnegative", field="angular_spread_deg")
        if not 0 <= self.sector_halfangle_deg <= 90:
            raise ConfigError("sector_halfangle_deg must lie in [0, 90]", field="sector_halfangle_deg")
        for name in ("pathloss_exponent", "reference_gain", "reference_distance_m"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive", field=name)


@dataclass(frozen=True)
class PlacementDiagnostics:
    distance_m: float
    azimuth_deg: float
    pathloss_amplitude: float
    path_angles_deg: Tuple[float, ...] = field(default_factory=tuple)


def steering_matrix(geom: UlaGeometry, angles_deg: Sequence[float]) -> np.ndarray:
    """Unit-norm ULA responses for many angles, one column per angle (B x N)."""
    angles = np.atleast_1d(np.asarray(angles_deg, dtype=float))
    n = np.arange(geom.num_antennas)[:, None]
    phase = -2j * np.pi * geom.spacing_wavelengths * np.cos(np.deg2rad(angles))[None, :]
    return np.exp(phase * n) / np.sqrt(geom.num_antennas)


def los_steering(geom: UlaGeometry, phi_deg: float, role: str = "ue") -> ChannelVector:
    """Textbook far-field LoS channel g(phi) with unit gain."""
    return ChannelVector(steering_matrix(geom, [phi_deg])[:, 0], role=role)


def pathloss_amplitude(cfg: StochasticChannelConfig, geom: UlaGeometry, distance_m: float) -> float:
    """Log-distance amplitude scaling; E||h||^2 equals its square at any fixed distance."""
    ratio = distance_m / cfg.reference_distance_m
    return float(
        cfg.reference_gain * np.sqrt(geom.num_antennas) * ratio ** (-cfg.pathloss_exponent / 2.0)
    )


def sample_stochastic_channel(
    cfg: StochasticChannelConfig,
    geom: UlaGeometry,
    rng: np.random.Generator,
    role: str = "ue",
    distance_m: Optional[float] = None,
) -> Tuple[ChannelVector, PlacementDiagnostics]:
    """Draw a placement and a clustered multipath channel for it.

    Draw order is fixed (distance, azimuth, path angles, path gains) so the
    result is a deterministic function of the stream state. Passing
    distance_m pins the distance but still consumes its draw.
    """
    drawn_distance = rng.uniform(cfg.dist_min_m, cfg.dist_max_m)
    distance = float(drawn_distance if distance_m is None else distance_m)
    azimuth = rng.uniform(90.0 - cfg.sector_halfangle_deg, 90.0 + cfg.sector_halfangle_deg)

    # Laplacian with standard deviation angular_spread_deg
    offsets = rng.laplace(0.0, cfg.angular_spread_deg / np.sqrt(2.0), cfg.num_paths)
    path_angles = azimuth + offsets
    gains = complex_normal(rng, cfg.num_paths, 1.0 / cfg.num_paths)

    amplitude = pathloss_amplitude(cfg, geom, distance)
    b = amplitude * (steering_matrix(geom, path_angles) @ gains)
    diagnostics = PlacementDiagnostics(
        distance_m=distance,
        azimuth_deg=float(azimuth),
        pathloss_amplitude=amplitude,
        path_angles_deg=tuple(float(a) for a in path_angles),
    )
    return ChannelVector(b, role=role), diagnostics
