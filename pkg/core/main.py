import argparse
import logging
import logging.handlers
import os
import sys
from typing import List, Optional

import numpy as np

from core import __version__
from core.config import ScenarioConfig, load_config
from core.errors import ConfigError, SimulationError
from core.harness import (
    emit_beam_pattern,
    emit_cdf,
    emit_results,
    pattern_for_trial,
    run_campaign,
    sweep_snr,
)
from core.verify import run_verification

# Get logger for this module
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def configure_logging() -> None:
    """Configure the root logger from VILLAIN_LOG_LEVEL and VILLAIN_LOG_FILE."""
    level = os.getenv("VILLAIN_LOG_LEVEL", "INFO").upper()
    log_file = os.getenv("VILLAIN_LOG_FILE", "simulation.log")
    handlers = [logging.StreamHandler()]
    if log_file:
        handlers.append(
            logging.handlers.RotatingFileHandler(
                log_file,
                maxBytes=1024 * 1024,  # 1MB
                backupCount=5,
            )
        )
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
    )


def parse_grid(text: str) -> np.ndarray:
    """Parse 'start:stop:step' (degrees, stop inclusive) into an angle grid."""
    try:
        start, stop, step = (float(part) for part in text.split(":"))
    except ValueError as e:
        raise ConfigError(f"Grid '{text}' is not of the form start:stop:step", field="grid") from e
    if not step > 0 or stop < start:
        raise ConfigError("Grid needs step > 0 and stop >= start", field="grid")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def parse_snr_list(text: str) -> List[Optional[float]]:
    """Comma-separated SNR values in dB; 'inf' means a noiseless BS."""
    values = []
    for part in text.split(","):
        part = part.strip()
        if part.lower() in ("inf", "none", "noiseless"):
            values.append(None)
            continue
        try:
            values.append(float(part))
        except ValueError as e:
            raise ConfigError(f"Invalid SNR value '{part}'", field="snr_db") from e
    return values


def _load(args) -> ScenarioConfig:
    cfg = load_config(args.config)
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["master_seed"] = args.seed
    if getattr(args, "trials", None) is not None:
        overrides["num_trials"] = args.trials
    return cfg.with_overrides(**overrides) if overrides else cfg


def _jobs(args) -> int:
    if args.jobs == 0:
        raise ConfigError("--jobs must be nonzero", field="jobs")
    return args.jobs


def _print_summary(res) -> None:
    summary = res.summary
    print(f"Scenario: {res.config.name} ({res.config.estimator})")
    print(f"Trials: {summary.num_trials}  excluded: {summary.num_excluded}  degenerate: {summary.num_degenerate}")
    print(f"Median delta: {summary.median_delta_db} dB")
    print(f"Fraction delta > 0 dB: {summary.fraction_positive}")


def cmd_scenario(args) -> int:
    cfg = _load(args)
    res = run_campaign(cfg, n_jobs=_jobs(args))
    _print_summary(res)
    if args.out:
        emit_results(res, args.format, args.out)
        print(f"Results written to {args.out}")
    return EXIT_OK


def cmd_beam_pattern(args) -> int:
    cfg = _load(args)
    pattern = pattern_for_trial(cfg, parse_grid(args.grid), trial_index=args.trial_index)
    emit_beam_pattern(pattern, args.out)
    peak_angle, peak_db = max(pattern, key=lambda row: row[1])
    print(f"Beam peak: {peak_db:.2f} dB at {peak_angle} deg")
    print(f"Beam pattern written to {args.out}")
    return EXIT_OK


def cmd_cdf(args) -> int:
    cfg = _load(args)
    snr_values = parse_snr_list(args.snr_db) if args.snr_db else [cfg.noise.snr_db]
    estimators = [e.strip() for e in args.estimators.split(",")] if args.estimators else [cfg.estimator]
    results = sweep_snr(cfg, snr_values, estimators, n_jobs=_jobs(args))
    for res in results.values():
        _print_summary(res)
    emit_cdf(results, args.out)
    print(f"CDF written to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verification(quick=args.quick, seed=args.seed)
    return EXIT_OK if report.ok else EXIT_RUNTIME


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="villain",
        description="Secret-pilot channel estimation and MISO downlink security simulator",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    scenario = sub.add_parser("scenario", help="Run the trials of a scenario config")
    scenario.add_argument("--config", required=True, help="Scenario JSON file")
    scenario.add_argument("--seed", type=int, help="Override master_seed")
    scenario.add_argument("--trials", type=int, help="Override num_trials")
    scenario.add_argument("--out", help="Results file")
    scenario.add_argument("--format", choices=["csv", "json"], default="csv")
    scenario.add_argument("--jobs", type=int, default=1, help="Parallel workers (-1 for all cores)")
    scenario.set_defaults(handler=cmd_scenario)

    beam = sub.add_parser("beam-pattern", help="Sweep the precoder beam over an angle grid")
    beam.add_argument("--config", required=True)
    beam.add_argument("--grid", default="0:180:0.25", help="start:stop:step in degrees")
    beam.add_argument("--out", required=True)
    beam.add_argument("--seed", type=int)
    beam.add_argument("--trial-index", type=int, default=0)
    beam.set_defaults(handler=cmd_beam_pattern)

    cdf = sub.add_parser("cdf", help="Monte Carlo CDF of the advantage")
    cdf.add_argument("--config", required=True)
    cdf.add_argument("--trials", type=int)
    cdf.add_argument("--out", required=True)
    cdf.add_argument("--seed", type=int)
    cdf.add_argument("--snr-db", help="Comma-separated SNR list, e.g. 0,15,30")
    cdf.add_argument("--estimators", help="Comma-separated estimators, e.g. ls,villain")
    cdf.add_argument("--jobs", type=int, default=1)
    cdf.set_defaults(handler=cmd_cdf)

    verify = sub.add_parser("verify", help="Run the built-in property checks")
    verify.add_argument("--quick", action="store_true", help="Fewer random instances")
    verify.add_argument("--seed", type=int, default=2024)
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging()
    try:
        return args.handler(args)
    except ConfigError as e:
        logger.error("Invalid configuration: %s", e)
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (SimulationError, OSError) as e:
        logger.error("Run failed: %s", e)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
