#!/usr/bin/env python3
"""Run the shipped tradeoff experiment and print the report table.

Usage: python scripts/run_tradeoff.py [--config FILE] [--out DIR]
"""

import argparse
from pathlib import Path

from helpline.fixtures import fixture_path
from helpline.harness import load_config, render_report, run_experiment


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=str(fixture_path("experiment.ini")))
    parser.add_argument("--out", help="also write report files to this directory")
    args = parser.parse_args()

    report = run_experiment(load_config(args.config))
    table = render_report(report, "table")
    print(table, end="")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(table, encoding="utf-8")
        (out / "report.json").write_text(render_report(report, "json"), encoding="utf-8")
        print(f"wrote {out}/report.txt and {out}/report.json")


if __name__ == "__main__":
    main()
