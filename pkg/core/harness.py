"""Scenario orchestration: single trials, Monte Carlo campaigns and result files."""

import json
import math
import os
from dataclasses import dataclass, fields
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from core import __version__
from core.channel import ChannelVector, PlacementDiagnostics, los_steering, sample_stochastic_channel
from core.config import NoiseConfig, ScenarioConfig
from core.errors import ResultsIOError, SimulationError
from core.estimate import ESTIMATORS, ChannelEstimate
from core.metrics import (
    TrialMetrics,
    advantage,
    beam_pattern,
    delivered_power_theory,
    secrecy_positive,
)
from core.numerics import pinv_row
from core.pilot import AttackKind, PilotPhase, gen_attack, gen_pilot, synthesize_pilot_rx
from core.precode import DownlinkObservation, Precoder, downlink_tx_rx, draw_symbol, mrt
from utils.error_logger import ErrorLogger
from utils.rng import substream

error_logger = ErrorLogger(__name__)

CSV_COLUMNS = ["trial_index", "delta_db", "ue_power", "ed_power", "degenerate_flag", "estimator", "error"]


@dataclass(eq=False)
class LinkState:
    """Every intermediate quantity of one simulated link."""

    h: ChannelVector
    j: ChannelVector
    phase: PilotPhase
    estimate: ChannelEstimate
    precoder: Precoder
    observation: DownlinkObservation
    ue_placement: Optional[PlacementDiagnostics] = None
    ed_placement: Optional[PlacementDiagnostics] = None


@dataclass(frozen=True)
class CampaignSummary:
    num_trials: int
    num_excluded: int
    num_degenerate: int
    median_delta_db: Optional[float]
    fraction_positive: Optional[float]


@dataclass(eq=True)
class CampaignResult:
    config: ScenarioConfig
    trials: List[TrialMetrics]
    cdf_delta_db: List[float]
    summary: CampaignSummary
    tool_version: str = __version__

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tool_version": self.tool_version,
            "config": self.config.to_dict(),
            "summary": {
                "num_trials": self.summary.num_trials,
                "num_excluded": self.summary.num_excluded,
                "num_degenerate": self.summary.num_degenerate,
                "median_delta_db": _encode_float(self.summary.median_delta_db),
                "fraction_positive": self.summary.fraction_positive,
            },
            "cdf_delta_db": [_encode_float(x) for x in self.cdf_delta_db],
            "trials": [_trial_to_dict(t) for t in self.trials],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CampaignResult":
        summary = dict(data["summary"])
        summary["median_delta_db"] = _decode_float(summary["median_delta_db"])
        return cls(
            config=ScenarioConfig.from_dict(data["config"]),
            trials=[_trial_from_dict(t) for t in data["trials"]],
            cdf_delta_db=[_decode_float(x) for x in data["cdf_delta_db"]],
            summary=CampaignSummary(**summary),
            tool_version=data["tool_version"],
        )


def _encode_float(x: Optional[float]):
    if x is None:
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _decode_float(x) -> Optional[float]:
    if x is None:
        return None
    return float(x)


def _trial_to_dict(t: TrialMetrics) -> Dict[str, Any]:
    record = {f.name: getattr(t, f.name) for f in fields(TrialMetrics)}
    record["delta_db"] = _encode_float(t.delta_db)
    if t.ls_omega is not None:
        record["ls_omega"] = [t.ls_omega.real, t.ls_omega.imag]
    return record


def _trial_from_dict(record: Dict[str, Any]) -> TrialMetrics:
    record = dict(record)
    record["delta_db"] = _decode_float(record.get("delta_db"))
    if record.get("ls_omega") is not None:
        re, im = record["ls_omega"]
        record["ls_omega"] = complex(re, im)
    return TrialMetrics(**record)


def _draw_channels(cfg: ScenarioConfig, trial_index: int):
    geom = cfg.geometry
    if cfg.channel.model == "los":
        h = los_steering(geom, cfg.channel.ue_angle_deg, role="ue")
        j = los_steering(geom, cfg.channel.ed_angle_deg, role="ed")
        return h, j, None, None
    stochastic = cfg.channel.stochastic
    h, ue_place = sample_stochastic_channel(
        stochastic, geom, substream(cfg.master_seed, trial_index, "channel_ue"), role="ue"
    )
    j, ed_place = sample_stochastic_channel(
        stochastic, geom, substream(cfg.master_seed, trial_index, "channel_ed"), role="ed"
    )
    return h, j, ue_place, ed_place


def simulate_link(cfg: ScenarioConfig, trial_index: int) -> LinkState:
    """Run one pilot phase, estimation, MRT and downlink slot.

    All randomness comes from (master_seed, trial_index)-derived substreams.

    Raises:
        SimulationError: From any stage of the link.
    """
    h, j, ue_place, ed_place = _draw_channels(cfg, trial_index)
    seed = cfg.master_seed
    pilot = gen_pilot(cfg.pilot.length, cfg.pilot.symbol_energy, substream(seed, trial_index, "pilot"))
    z = gen_attack(cfg.attack_spec(), cfg.pilot.length, pilot, substream(seed, trial_index, "attack"))
    phase = synthesize_pilot_rx(
        h, j, pilot, z, cfg.bs_noise_var, substream(seed, trial_index, "bs_noise")
    )
    estimate = ESTIMATORS[cfg.estimator](phase, cfg.tolerance)
    precoder = mrt(estimate, cfg.power_budget, cfg.tolerance)
    symbol = draw_symbol(cfg.constellation, substream(seed, trial_index, "symbol"))
    observation = downlink_tx_rx(
        precoder, h, j, symbol,
        cfg.noise.ue_noise_var, cfg.noise.ed_noise_var,
        substream(seed, trial_index, "downlink_noise"),
        cfg.tolerance,
    )
    return LinkState(h, j, phase, estimate, precoder, observation, ue_place, ed_place)


def run_trial(cfg: ScenarioConfig, trial_index: int) -> TrialMetrics:
    """Simulate one trial and reduce it to its metrics.

    Simulation errors are recorded in the returned record instead of raised.
    """
    try:
        link = simulate_link(cfg, trial_index)
        adv = advantage(link.h, link.j, link.precoder)
    except SimulationError as e:
        error_logger.log_trial_failure(trial_index, e)
        return TrialMetrics(
            trial_index=trial_index,
            estimator=cfg.estimator,
            error=f"{type(e).__name__}: {e.message}",
        )

    ls_omega = None
    kind = cfg.attack_spec().kind
    if kind is not AttackKind.SILENT:
        # Contamination coefficient: LS estimates h + omega j in the noiseless case
        ls_omega = complex(link.phase.z @ pinv_row(link.phase.pilot, cfg.tolerance))

    obs = link.observation
    return TrialMetrics(
        trial_index=trial_index,
        estimator=cfg.estimator,
        delta_db=adv.delta_db,
        ue_power=adv.ue_power,
        ed_power=adv.ed_power,
        delivered_power_theory=delivered_power_theory(link.h, link.j, cfg.power_budget, cfg.tolerance),
        ls_omega=ls_omega,
        degenerate_flag=link.estimate.degenerate,
        secrecy_positive=secrecy_positive(adv.delta_db),
        residual_sigma=link.estimate.residual_sigma,
        symbol_error=float(abs(obs.s_hat - obs.symbol)),
    )


def summarize(trials: Sequence[TrialMetrics]) -> Tuple[List[float], CampaignSummary]:
    """Sorted delta samples of the successful trials and the campaign summary.

    +inf samples sort last and count as positive; failed trials are excluded.
    """
    included = [t.delta_db for t in trials if not t.failed]
    cdf = sorted(included)
    median = float(np.median(cdf)) if cdf else None
    fraction = float(np.mean([d > 0.0 for d in cdf])) if cdf else None
    summary = CampaignSummary(
        num_trials=len(trials),
        num_excluded=len(trials) - len(included),
        num_degenerate=sum(1 for t in trials if t.degenerate_flag),
        median_delta_db=median,
        fraction_positive=fraction,
    )
    return cdf, summary


def run_campaign(cfg: ScenarioConfig, n_jobs: int = 1) -> CampaignResult:
    """Run cfg.num_trials independent trials and collect them by trial index.

    Results do not depend on n_jobs: each trial draws only from its own substreams.
    """
    if cfg.pilot.length == 1 and cfg.estimator == "villain":
        error_logger.log_warning("Pilot length T=1: the VILLAIN zero-leakage guarantee needs T > 1")
    error_logger.log_info(
        "Starting campaign '%s': %d trials, estimator=%s, jobs=%d",
        cfg.name, cfg.num_trials, cfg.estimator, n_jobs,
    )
    indices = range(cfg.num_trials)
    if n_jobs == 1:
        trials = [run_trial(cfg, i) for i in indices]
    else:
        trials = Parallel(n_jobs=n_jobs)(delayed(run_trial)(cfg, i) for i in indices)
    trials = sorted(trials, key=lambda t: t.trial_index)

    cdf, summary = summarize(trials)
    error_logger.log_info(
        "Campaign '%s' done: median delta %s dB, %s positive, %d excluded",
        cfg.name, summary.median_delta_db, summary.fraction_positive, summary.num_excluded,
    )
    return CampaignResult(config=cfg, trials=trials, cdf_delta_db=cdf, summary=summary)


def sweep_snr(
    cfg: ScenarioConfig,
    snr_db_values: Iterable[Optional[float]],
    estimators: Iterable[str] = ("ls", "villain"),
    n_jobs: int = 1,
) -> Dict[Tuple[str, Optional[float]], CampaignResult]:
    """One campaign per (estimator, SNR) pair, all on the same master seed."""
    results = {}
    for estimator in estimators:
        for snr_db in snr_db_values:
            noise = NoiseConfig(
                snr_db=snr_db,
                ue_noise_var=cfg.noise.ue_noise_var,
                ed_noise_var=cfg.noise.ed_noise_var,
            )
            run_cfg = cfg.with_overrides(
                estimator=estimator, noise=noise, name=f"{cfg.name}-{estimator}-snr{snr_db}"
            )
            results[(estimator, snr_db)] = run_campaign(run_cfg, n_jobs=n_jobs)
    return results


def format_db(value: Optional[float]) -> str:
    if value is None:
        return ""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(float(value))


def _write_text(path: str, text: str) -> None:
    try:
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        error_logger.log_error(f"Failed to write results to {path}", e)
        raise ResultsIOError("Cannot write results", path=path, original_exception=e) from e


def trials_frame(res: CampaignResult) -> pd.DataFrame:
    rows = [
        {
            "trial_index": t.trial_index,
            "delta_db": format_db(t.delta_db),
            "ue_power": format_db(t.ue_power),
            "ed_power": format_db(t.ed_power),
            "degenerate_flag": t.degenerate_flag,
            "estimator": t.estimator,
            "error": t.error or "",
        }
        for t in res.trials
    ]
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def emit_results(res: CampaignResult, fmt: str, path: str) -> str:
    """Write a campaign as CSV (one row per trial) or JSON (full result with config echo).

    Raises:
        ValueError: For an unknown format.
        ResultsIOError: If the destination cannot be written.
    """
    fmt = fmt.lower()
    if fmt == "csv":
        text = trials_frame(res).to_csv(index=False, lineterminator="\n")
    elif fmt == "json":
        text = json.dumps(res.to_dict(), indent=2, allow_nan=False) + "\n"
    else:
        raise ValueError(f"Unknown results format '{fmt}'")
    _write_text(path, text)
    error_logger.log_info("Wrote %d trials as %s to %s", len(res.trials), fmt, path)
    return path


def pattern_for_trial(
    cfg: ScenarioConfig, angles_deg: Sequence[float], trial_index: int = 0
) -> List[Tuple[float, float]]:
    """Beam pattern of the precoder built in one trial of cfg."""
    link = simulate_link(cfg, trial_index)
    return beam_pattern(link.precoder, cfg.geometry, angles_deg)


def emit_beam_pattern(pattern: Sequence[Tuple[float, float]], path: str) -> str:
    frame = pd.DataFrame(
        [{"angle_deg": repr(a), "power_db": format_db(p)} for a, p in pattern],
        columns=["angle_deg", "power_db"],
    )
    _write_text(path, frame.to_csv(index=False, lineterminator="\n"))
    error_logger.log_info("Wrote beam pattern with %d angles to %s", len(pattern), path)
    return path


def cdf_frame(results: Dict[Tuple[str, Optional[float]], CampaignResult]) -> pd.DataFrame:
    """Long table (estimator, snr_db, delta_db, cdf) over one or more campaigns."""
    rows = []
    for (estimator, snr_db), res in results.items():
        count = len(res.cdf_delta_db)
        for rank, delta in enumerate(res.cdf_delta_db, start=1):
            rows.append({
                "estimator": estimator,
                "snr_db": "inf" if snr_db is None else repr(float(snr_db)),
                "delta_db": format_db(delta),
                "cdf": repr(rank / count),
            })
    return pd.DataFrame(rows, columns=["estimator", "snr_db", "delta_db", "cdf"])


def emit_cdf(results: Dict[Tuple[str, Optional[float]], CampaignResult], path: str) -> str:
    _write_text(path, cdf_frame(results).to_csv(index=False, lineterminator="\n"))
    error_logger.log_info("Wrote CDF of %d campaigns to %s", len(results), path)
    return path
