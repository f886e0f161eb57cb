#!/usr/bin/env python3
"""Scan the ground Sturm-Liouville eigenvalue of the excitability well.

For each sampled p, builds the linearization about the stationary state
u = c_p(x) on the given domain and prints lambda_0(p) together with the
sign of the mean-excitation instability criterion int f'(c_p). lambda_0 is
increasing in p: deeper wells shrink the oscillatory pocket. On the paper's
(-50, 50) domain the crossing sits far above p = 5; on smaller domains it
is reachable (try --a -2 --b 2).
"""
import argparse

from fhnlab.grid import quad
from fhnlab.stability import integral_instability_criterion, well_sl_problem
from fhnlab.sturm import sl_spectrum


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--a", type=float, default=-50.0)
    parser.add_argument("--b", type=float, default=50.0)
    parser.add_argument("--d", type=float, default=1.0)
    parser.add_argument("--n", type=int, default=2001)
    parser.add_argument("--p", type=float, nargs="+",
                        default=[0.5, 1.1, 2.0, 3.0, 5.0])
    args = parser.parse_args()

    print(f"{'p':>8s} {'lambda_0':>12s} {'int f`(c_p)':>12s} {'mean-unstable':>13s}")
    for p in args.p:
        problem = well_sl_problem(p, (args.a, args.b), args.d, args.n)
        lam0 = sl_spectrum(problem, 1)[0].lam
        unstable, margin = integral_instability_criterion(problem)
        print(f"{p:8.3f} {lam0:12.6f} {margin:12.3f} {str(unstable):>13s}")


if __name__ == "__main__":
    main()
