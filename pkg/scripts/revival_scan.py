#!/usr/bin/env python3
"""Fractional revival schedule with entropy refinement and peak counts.

For each requested fraction f of the full revival time tau n^2, predicts
t = tau n^2 p/(8q), scans the entropy of the conditional distribution in a
window around the prediction, and reports the refined minimum, the empirical
linear correction rho, and the number of peaks at the minimum.
"""

import argparse

from aqwalk import (
    conditional_distribution,
    delta_state,
    evolve,
    hadamard,
    peak_count,
    refine_entropy_minimum,
    revival_ray_angles,
    revival_times,
)
from aqwalk.cli import parse_fractions


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=400)
    parser.add_argument("--fractions", default="1/8,1/16,1/24,1/12")
    parser.add_argument("--no-refine", action="store_true")
    args = parser.parse_args()
    coin = hadamard()
    pairs = parse_fractions(args.fractions)
    schedule = revival_times(args.n, coin, pairs)
    psi0 = delta_state(args.n, args.n // 2, "R")
    print(f"n = {args.n}, tau = {schedule.tau:.6f}")
    print(f"{'p':>3} {'q':>3} {'t_pred':>8} {'t_min':>8} {'rho':>7} {'entropy':>9} {'peaks':>5} {'rays':>4}")
    for p, q, t_pred in schedule.entries:
        rays = revival_ray_angles(args.n, coin, p, q)
        if args.no_refine:
            print(f"{p:3d} {q:3d} {t_pred:8d} {'-':>8} {'-':>7} {'-':>9} {'-':>5} {rays['predicted_ray_count']:4d}")
            continue
        t_min, ent_min = refine_entropy_minimum(args.n, coin, psi0, t_pred, halfwidth=args.n)
        state, _ = evolve(psi0, coin, t_min)
        peaks = peak_count(conditional_distribution(state))
        rho = (t_min - t_pred) / args.n
        print(
            f"{p:3d} {q:3d} {t_pred:8d} {t_min:8d} {rho:7.3f} {ent_min:9.4f} "
            f"{peaks:5d} {rays['predicted_ray_count']:4d}"
        )


if __name__ == "__main__":
    main()
