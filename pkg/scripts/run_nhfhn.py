#!/usr/bin/env python3
"""Propagation dichotomy for the nonhomogeneous FitzHugh-Nagumo system.

Runs the excitability-well presets at p = 1.1 (wave reaches the boundary)
and p = 2 (propagation fails; only the center oscillates) and prints the
probe amplitudes. Use --fast for the coarse smoke variant (~10 s per run
instead of minutes).
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
    for name in ("nhfhn_p1.1", "nhfhn_p2"):
        argv = ["reproduce", name, "--out", f"{args.out}/{name}"]
        if args.fast:
            argv.append("--fast")
        worst = max(worst, cli_main(argv))
    return worst


if __name__ == "__main__":
    sys.exit(main())
