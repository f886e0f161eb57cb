#!/usr/bin/env python3
"""Reproduce the four toy-model figure regimes.

Runs the fig1..fig4 presets into out/figN and prints each verdict. Pass
--fast for a reduced-horizon smoke run.
"""
import argparse
import sys

from fhnlab.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out")
    parser.add_argument("--fast", action="store_true")
    args = parser.parse_args()
    worst = 0
    for name in ("fig1", "fig2", "fig3", "fig4"):
        argv = ["reproduce", name, "--out", f"{args.out}/{name}"]
        if args.fast:
            argv.append("--fast")
        worst = max(worst, cli_main(argv))
    return worst


if __name__ == "__main__":
    sys.exit(main())
