"""Certified selection on seeded random matrices: worst invNorm/bound per n.

    python scripts/bound_sweep.py --n-max 64 --seeds 500 --csv bound_sweep.csv
"""

import argparse
import csv
import math
import time

import numpy as np

from bestinv import ALPHA, brute_force_best_pair, random_ortho, select_certified


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-min", type=int, default=3)
    ap.add_argument("--n-max", type=int, default=64)
    ap.add_argument("--seeds", type=int, default=500)
    ap.add_argument("--oracle", action="store_true", help="also record the exhaustive optimum")
    ap.add_argument("--csv")
    args = ap.parse_args()

    rows = []
    t0 = time.perf_counter()
    for n in range(args.n_min, args.n_max + 1):
        b = math.sqrt(n / ALPHA)
        ratios, gaps, depth = [], [], []
        for s in range(args.seeds):
            U = random_ortho(n, np.random.default_rng([n, s]))
            sel = select_certified(U)
            ratios.append(sel.inv_norm / b)
            depth.append(sel.depth)
            if args.oracle:
                gaps.append(sel.sigma2**2 / brute_force_best_pair(U).lambda2_max)
        row = {
            "n": n,
            "max_ratio": max(ratios),
            "mean_ratio": float(np.mean(ratios)),
            "mean_caseA_depth": float(np.mean(depth)),
            "min_certified_over_oracle": min(gaps) if gaps else "",
        }
        rows.append(row)
        print(f"n={n:3d} max invNorm/bound={row['max_ratio']:.6f} mean={row['mean_ratio']:.4f} "
              f"depth={row['mean_caseA_depth']:.2f}")
    print(f"{time.perf_counter() - t0:.1f}s")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            wr = csv.DictWriter(fh, fieldnames=list(rows[0]))
            wr.writeheader()
            wr.writerows(rows)


if __name__ == "__main__":
    main()
