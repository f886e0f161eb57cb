#!/usr/bin/env python3
"""Tabulate the toy-model Hopf cascade: mode classes as alpha sweeps up.

Prints one line per sampled alpha with the number of unstable modes and the
crossing locations alpha = lambda_k found inside the range.
"""
import argparse

from fhnlab.stability import hopf_cascade_toy, mode_eigenvalues, toy_unstable_count
from fhnlab.spectral import cosine_eigenvalue


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lo", type=float, default=-1.0)
    parser.add_argument("--hi", type=float, default=50.0)
    parser.add_argument("--samples", type=int, default=12)
    parser.add_argument("--k-max", type=int, default=8)
    args = parser.parse_args()

    crossings = hopf_cascade_toy((args.lo, args.hi), args.k_max)
    print("crossings (k, alpha):")
    for k, alpha in crossings:
        print(f"  k={k:2d}  alpha={alpha:.6f}")

    print(f"\n{'alpha':>10s} {'unstable':>9s}  leading Re sigma per mode")
    step = (args.hi - args.lo) / max(args.samples - 1, 1)
    for i in range(args.samples):
        alpha = args.lo + i * step
        count = toy_unstable_count(alpha, args.k_max)
        res = []
        for k in range(min(args.k_max, 4) + 1):
            me = mode_eigenvalues(alpha - cosine_eigenvalue(k), 1.0, k)
            res.append(f"{max(me.sigma1.real, me.sigma2.real):+.3f}")
        print(f"{alpha:10.4f} {count:9d}  {' '.join(res)}")


if __name__ == "__main__":
    main()
