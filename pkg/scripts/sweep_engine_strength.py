#!/usr/bin/env python3
"""Sweep the language engine's correction strength and print the frontier.

How much correction each grammar mode needs to reach a given frame
accuracy is an empirical question; this sweep reports frame accuracy per
(mode, max_edit) so the strength can be read off the table instead of
guessed.

Usage: python scripts/sweep_engine_strength.py [--config FILE] [--max-strength N]
"""

import argparse
from dataclasses import replace

from helpline.fixtures import fixture_path
from helpline.harness import load_config, run_experiment


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=str(fixture_path("experiment.ini")))
    parser.add_argument("--max-strength", type=int, default=4)
    args = parser.parse_args()

    base = load_config(args.config)
    modes = sorted(base.grammars)
    header = "max_edit  " + "  ".join(f"{m.upper():>8}" for m in modes)
    print(header)
    print("-" * len(header))
    for strength in range(args.max_strength + 1):
        report = run_experiment(replace(base, max_edit=strength))
        row = "  ".join(f"{report.modes[m].frame_accuracy:8.4f}" for m in modes)
        print(f"{strength:>8}  {row}")


if __name__ == "__main__":
    main()
