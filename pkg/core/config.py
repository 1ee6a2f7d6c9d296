"""Scenario configuration: dataclasses mirrored field for field by the JSON config files."""

import json
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Dict, Optional

from core.channel import StochasticChannelConfig, UlaGeometry
from core.errors import ConfigError, SimulationError
from core.estimate import ESTIMATORS
from core.numerics import ToleranceConfig
from core.pilot import AttackKind, AttackSpec
from core.precode import CONSTELLATIONS


@dataclass(frozen=True)
class PilotConfig:
    length: int = 8
    symbol_energy: float = 1.0


@dataclass(frozen=True)
class AttackConfig:
    """Eavesdropper behaviour; jam_power_db is Q relative to Es."""

    kind: str = "silent"
    jam_power_db: float = 25.0
    replay_scale: float = 1.0


@dataclass(frozen=True)
class NoiseConfig:
    """snr_db = Es / N_bs in dB; None means a noiseless basestation."""

    snr_db: Optional[float] = None
    ue_noise_var: float = 0.0
    ed_noise_var: float = 0.0


@dataclass(frozen=True)
class ChannelConfig:
    model: str = "los"
    ue_angle_deg: float = 70.0
    ed_angle_deg: float = 20.0
    stochastic: StochasticChannelConfig = field(default_factory=StochasticChannelConfig)


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "scenario"
    geometry: UlaGeometry = field(default_factory=UlaGeometry)
    pilot: PilotConfig = field(default_factory=PilotConfig)
    power_budget: float = 1.0
    attack: AttackConfig = field(default_factory=AttackConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    estimator: str = "villain"
    constellation: str = "qpsk"
    master_seed: int = 0
    num_trials: int = 1
    tolerance: ToleranceConfig = field(default_factory=ToleranceConfig)

    @property
    def bs_noise_var(self) -> float:
        if self.noise.snr_db is None:
            return 0.0
        return self.pilot.symbol_energy / 10.0 ** (self.noise.snr_db / 10.0)

    def attack_spec(self) -> AttackSpec:
        return AttackSpec.from_db(
            self.attack.kind,
            jam_power_db=self.attack.jam_power_db,
            symbol_energy=self.pilot.symbol_energy,
            replay_scale=self.attack.replay_scale,
        )

    def validate(self) -> "ScenarioConfig":
        """Check cross-field constraints; returns self so calls can be chained.

        Raises:
            ConfigError: Naming the first offending field.
        """
        if int(self.pilot.length) != self.pilot.length or self.pilot.length < 1:
            raise ConfigError("pilot.length must be a positive integer", field="pilot.length")
        if not self.pilot.symbol_energy > 0:
            raise ConfigError("pilot.symbol_energy must be positive", field="pilot.symbol_energy")
        if not self.power_budget > 0:
            raise ConfigError("power_budget must be positive", field="power_budget")
        if self.noise.ue_noise_var < 0 or self.noise.ed_noise_var < 0:
            raise ConfigError("noise variances must be nonnegative", field="noise")
        if self.channel.model not in ("los", "stochastic"):
            raise ConfigError(
                f"Unknown channel model '{self.channel.model}'", field="channel.model"
            )
        if self.estimator not in ESTIMATORS:
            raise ConfigError(f"Unknown estimator '{self.estimator}'", field="estimator")
        if self.constellation not in CONSTELLATIONS:
            raise ConfigError(
                f"Unknown constellation '{self.constellation}'", field="constellation"
            )
        if int(self.num_trials) != self.num_trials or self.num_trials < 1:
            raise ConfigError("num_trials must be a positive integer", field="num_trials")
        if int(self.master_seed) != self.master_seed or self.master_seed < 0:
            raise ConfigError("master_seed must be a nonnegative integer", field="master_seed")
        try:
            AttackKind(self.attack.kind)
            self.attack_spec()
        except ValueError as e:
            raise ConfigError(f"Unknown attack kind '{self.attack.kind}'", field="attack.kind") from e
        except ConfigError as e:
            raise ConfigError(e.message, field=f"attack.{e.field}") from e
        return self

    def with_overrides(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes).validate()

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ScenarioConfig":
        """Build and validate a config from a (JSON-decoded) dictionary.

        Raises:
            ConfigError: For unknown keys, wrong types or invalid values.
        """
        if not isinstance(data, dict):
            raise ConfigError("scenario config must be a JSON object")
        try:
            return _build(cls, data, prefix="").validate()
        except ConfigError:
            raise
        except SimulationError as e:
            raise ConfigError(e.message, original_exception=e) from e
        except (TypeError, ValueError) as e:
            raise ConfigError("invalid scenario config", original_exception=e) from e


_NESTED = {
    (ScenarioConfig, "geometry"): UlaGeometry,
    (ScenarioConfig, "pilot"): PilotConfig,
    (ScenarioConfig, "attack"): AttackConfig,
    (ScenarioConfig, "noise"): NoiseConfig,
    (ScenarioConfig, "channel"): ChannelConfig,
    (ScenarioConfig, "tolerance"): ToleranceConfig,
    (ChannelConfig, "stochastic"): StochasticChannelConfig,
}


def _build(cls, data: Dict[str, Any], prefix: str):
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"Unknown config key '{prefix}{unknown[0]}'", field=f"{prefix}{unknown[0]}")
    kwargs = {}
    for key, value in data.items():
        nested = _NESTED.get((cls, key))
        if nested is not None:
            if not isinstance(value, dict):
                raise ConfigError(f"'{prefix}{key}' must be an object", field=f"{prefix}{key}")
            value = _build(nested, value, prefix=f"{prefix}{key}.")
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except ConfigError as e:
        field_name = f"{prefix}{e.field}" if e.field else prefix.rstrip(".")
        raise ConfigError(e.message, field=field_name) from e


def load_config(path: str) -> ScenarioConfig:
    """Read a scenario config from a JSON file.

    Raises:
        ConfigError: If the file cannot be read, is not JSON, or is invalid.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError("Cannot read config file", details={"path": path}, original_exception=e) from e
    except json.JSONDecodeError as e:
        raise ConfigError("Config file is not valid JSON", details={"path": path}, original_exception=e) from e
    return ScenarioConfig.from_dict(data)
