import argparse
import sys
import os

# Add root directory to Python path
root_dir = os.path.abspath(os.path.dirname(__file__))
sys.path.insert(0, root_dir)

import subprocess

from core.main import main as simulator_main


def run_simulator(argv):
    """Hand the remaining arguments to the simulator CLI"""
    return simulator_main(argv)


def run_tests(fast=False):
    """Run the pytest suite"""
    print("Running tests...")
    command = [sys.executable, "-m", "pytest", "tests/"]
    if fast:
        command.extend(["-m", "not slow"])
    return subprocess.run(command, cwd=root_dir).returncode


def reproduce(out_dir):
    """Regenerate the line-of-sight and noisy-campaign experiment data"""
    print(f"Reproducing experiments into {out_dir}...")
    return subprocess.run(
        [sys.executable, "scripts/reproduce_experiments.py", "--out-dir", out_dir], cwd=root_dir
    ).returncode


def main():
    parser = argparse.ArgumentParser(description="VILLAIN Link Simulator Management", allow_abbrev=False)
    parser.add_argument("command", choices=["run", "test", "reproduce"],
                        help="Command to execute: run, test, or reproduce")
    parser.add_argument("--fast", action="store_true", help="Skip slow Monte Carlo tests")
    parser.add_argument("--out-dir", default="results", help="Output directory for reproduce")
    args, rest = parser.parse_known_args()

    if args.command == "run":
        return run_simulator(rest)
    elif args.command == "test":
        return run_tests(fast=args.fast)
    elif args.command == "reproduce":
        return reproduce(args.out_dir)


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\nOperation cancelled by user")
        sys.exit(0)
