#!/usr/bin/env python3
"""Quantum carpet and revival heat maps as PGM images.

Produces three images for the absorbing Hadamard walk:
  carpet.pgm    space-time intensity of the conditional distribution
  flip.pgm      site-aggregated |Q^t|^2 at the half revival (mirror flip)
  full.pgm      site-aggregated |Q^t|^2 at the full revival (identity-like)
"""

import argparse

import numpy as np

from aqwalk import (
    apply_step,
    conditional_distribution,
    delta_state,
    hadamard,
    matrix_power_heatmap,
    revival_times,
    write_pgm,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=400)
    parser.add_argument("--site", type=int, default=0, help="1-based start site (default center)")
    parser.add_argument("--stride", type=int, default=64)
    parser.add_argument("--outdir", default=".")
    args = parser.parse_args()
    coin = hadamard()
    n = args.n
    site = args.site if args.site else n // 2

    schedule = revival_times(n, coin, [(4, 1), (8, 1)])
    t_flip = schedule.entries[0][2]
    t_full = schedule.entries[1][2]

    state = delta_state(n, site, "R")
    rows = [conditional_distribution(state)]
    for t in range(1, t_full + 1):
        state, _, _ = apply_step(state, coin)
        if t % args.stride == 0:
            rows.append(conditional_distribution(state))
    carpet = np.array(rows)
    write_pgm(carpet, f"{args.outdir}/carpet.pgm", log_scale=True)
    print(f"carpet: {carpet.shape[0]} rows x {n} sites -> carpet.pgm")

    for label, t in (("flip", t_flip), ("full", t_full)):
        _, site_map = matrix_power_heatmap(n, coin, t)
        write_pgm(site_map, f"{args.outdir}/{label}.pgm", log_scale=True)
        print(f"{label} revival t={t} -> {label}.pgm")


if __name__ == "__main__":
    main()
