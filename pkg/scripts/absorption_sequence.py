#!/usr/bin/env python3
"""Left-edge absorption probability vs interior size for the Hadamard walk.

Prints p_m for m = 1..max and checks the rational recurrence
p_{m+1} = (1 + 2 p_m) / (2 + 2 p_m), whose fixed point is 1/sqrt(2).
"""

import argparse
import math

from aqwalk import absorption_probability, hadamard


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-interior", type=int, default=12)
    parser.add_argument("--tol", type=float, default=1e-10)
    args = parser.parse_args()
    coin = hadamard()
    print(f"{'m':>3} {'p_m':>18} {'(1+2p)/(2+2p)':>18} {'defect':>10}")
    prev = None
    for m in range(1, args.max_interior + 1):
        p = absorption_probability(m, coin, tol=args.tol)
        if prev is None:
            print(f"{m:3d} {p:18.12f} {'-':>18} {'-':>10}")
        else:
            pred = (1.0 + 2.0 * prev) / (2.0 + 2.0 * prev)
            print(f"{m:3d} {p:18.12f} {pred:18.12f} {abs(p - pred):10.2e}")
        prev = p
    print(f"\nfixed point 1/sqrt(2) = {1.0 / math.sqrt(2.0):.12f}")
    print(f"defect at m={args.max_interior}: {abs(prev - 1.0 / math.sqrt(2.0)):.2e}")


if __name__ == "__main__":
    main()
