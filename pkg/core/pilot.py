"""Pilot phase: secret pilot sequences, eavesdropper attack signals and the BS receive matrix."""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from core.errors import ConfigError, DimensionMismatch
from core.numerics import as_cmatrix, as_cvector
from utils.rng import complex_normal


@dataclass(eq=False)
class PilotSequence:
    s: np.ndarray
    symbol_energy: float = 1.0

    def __post_init__(self):
        self.s = as_cvector(self.s, name="pilot")
        if not self.symbol_energy > 0:
            raise ConfigError("symbol_energy must be positive", field="symbol_energy")

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.s, dtype=dtype)

    def __len__(self) -> int:
        return self.s.size


class AttackKind(str, Enum):
    SILENT = "silent"
    GAUSSIAN_JAM = "gaussian_jam"
    PILOT_REPLAY = "pilot_replay"


@dataclass(frozen=True)
class AttackSpec:
    """What the eavesdropper transmits during the pilot phase.

    jam_power is the linear variance Q of the jamming samples; replay_scale is
    the factor alpha of a replayed pilot.
    """

    kind: AttackKind = AttackKind.SILENT
    jam_power: float = 0.0
    replay_scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", AttackKind(self.kind))
        if self.kind is AttackKind.GAUSSIAN_JAM and not self.jam_power > 0:
            raise ConfigError("Gaussian jamming needs jam_power > 0", field="jam_power")
        if self.kind is AttackKind.PILOT_REPLAY and not self.replay_scale >= 1:
            raise ConfigError("Pilot replay needs replay_scale >= 1", field="replay_scale")

    @classmethod
    def from_db(
        cls,
        kind,
        jam_power_db: float = 0.0,
        symbol_energy: float = 1.0,
        replay_scale: float = 1.0,
    ) -> "AttackSpec":
        """Build a spec with Q given in dB relative to the pilot symbol energy."""
        kind = AttackKind(kind)
        jam_power = 0.0
        if kind is AttackKind.GAUSSIAN_JAM:
            jam_power = symbol_energy * 10.0 ** (jam_power_db / 10.0)
        return cls(kind=kind, jam_power=jam_power, replay_scale=replay_scale)


@dataclass(eq=False)
class PilotPhase:
    """Everything the BS observes (Y) plus the ground truth that produced it."""

    Y: np.ndarray
    pilot: PilotSequence
    z: np.ndarray
    noise_var: float = 0.0

    @property
    def num_antennas(self) -> int:
        return self.Y.shape[0]

    @property
    def length(self) -> int:
        return self.Y.shape[1]


def gen_pilot(length: int, symbol_energy: float, rng: np.random.Generator) -> PilotSequence:
    """Secret pilot with i.i.d. CN(0, Es) entries."""
    if length < 1:
        raise ConfigError("pilot length must be at least 1", field="length")
    if not symbol_energy > 0:
        raise ConfigError("symbol_energy must be positive", field="symbol_energy")
    return PilotSequence(complex_normal(rng, length, symbol_energy), symbol_energy)


def gen_attack(spec: AttackSpec, length: int, pilot: PilotSequence, rng: np.random.Generator) -> np.ndarray:
    """Eavesdropper transmit signal z for one pilot phase.

    The jamming samples come from rng, which must be a stream independent of
    the one that drew the pilot. Replay needs the pilot itself and therefore
    models an attacker that knows it.
    """
    if spec.kind is AttackKind.SILENT:
        return np.zeros(length, dtype=np.complex128)
    if spec.kind is AttackKind.GAUSSIAN_JAM:
        return complex_normal(rng, length, spec.jam_power)
    s = as_cvector(pilot, length=length, name="pilot")
    return spec.replay_scale * s


def synthesize_pilot_rx(
    h,
    j,
    pilot: PilotSequence,
    z,
    noise_var: float,
    rng: np.random.Generator,
) -> PilotPhase:
    """BS receive matrix Y = h s^T + j z^T + N with N i.i.d. CN(0, noise_var).

    The uplink channels are the transposes of the downlink rows (reciprocity),
    so the stored downlink vectors are used as they are.
    """
    if noise_var < 0:
        raise ConfigError("noise_var must be nonnegative", field="noise_var")
    h = as_cvector(h, name="UE channel")
    j = as_cvector(j, name="eavesdropper channel")
    if h.size != j.size:
        raise DimensionMismatch(
            "UE and eavesdropper channels differ in length",
            details={"ue": h.size, "ed": j.size},
        )
    s = as_cvector(pilot, name="pilot")
    z = as_cvector(z, name="attack signal")
    if z.size != s.size:
        raise DimensionMismatch(
            "attack signal and pilot differ in length",
            details={"pilot": s.size, "attack": z.size},
        )

    Y = np.outer(h, s) + np.outer(j, z)
    if noise_var > 0:
        Y = Y + complex_normal(rng, Y.shape, noise_var)
    if not isinstance(pilot, PilotSequence):
        pilot = PilotSequence(s)
    return PilotPhase(Y=as_cmatrix(Y, name="pilot receive matrix"), pilot=pilot, z=z, noise_var=float(noise_var))
