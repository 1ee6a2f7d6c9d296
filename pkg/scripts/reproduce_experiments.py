"""Regenerate the line-of-sight scenarios and the noisy SNR sweep as CSV files."""

import argparse
import os
import sys

# Add root directory to Python path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.config import load_config
from core.harness import emit_beam_pattern, emit_cdf, emit_results, pattern_for_trial, run_campaign, sweep_snr
from core.main import configure_logging
from core.metrics import default_angle_grid

CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "configs")

LOS_SCENARIOS = ["los_passive_ls", "los_active_ls", "los_active_villain"]


def reproduce_los(out_dir):
    """Advantage of trial 0 and its beam pattern for each LoS scenario."""
    for name in LOS_SCENARIOS:
        cfg = load_config(os.path.join(CONFIG_DIR, f"{name}.json")).with_overrides(num_trials=1)
        res = run_campaign(cfg)
        emit_results(res, "csv", os.path.join(out_dir, f"{name}.csv"))
        emit_beam_pattern(
            pattern_for_trial(cfg, default_angle_grid()),
            os.path.join(out_dir, f"{name}_beam.csv"),
        )
        print(f"{name}: delta = {res.trials[0].delta_db} dB")


def reproduce_sweep(out_dir, trials, jobs):
    cfg = load_config(os.path.join(CONFIG_DIR, "stochastic_villain.json"))
    if trials is not None:
        cfg = cfg.with_overrides(num_trials=trials)
    results = sweep_snr(cfg, [0.0, 15.0, 30.0], ["ls", "villain"], n_jobs=jobs)
    for (estimator, snr_db), res in results.items():
        print(
            f"{estimator} @ {snr_db} dB: median {res.summary.median_delta_db:.1f} dB, "
            f"{100 * res.summary.fraction_positive:.1f}% positive"
        )
    emit_cdf(results, os.path.join(out_dir, "snr_sweep_cdf.csv"))


def main():
    parser = argparse.ArgumentParser(description="Reproduce the LoS and noisy-campaign experiments")
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--trials", type=int, help="Override the sweep trial count")
    parser.add_argument("--jobs", type=int, default=-1)
    parser.add_argument("--skip-sweep", action="store_true")
    args = parser.parse_args()

    configure_logging()
    os.makedirs(args.out_dir, exist_ok=True)
    reproduce_los(args.out_dir)
    if not args.skip_sweep:
        reproduce_sweep(args.out_dir, args.trials, args.jobs)


if __name__ == "__main__":
    main()
