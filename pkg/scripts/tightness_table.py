"""Table of optimizer estimates a_n, b_n against alpha/n and sqrt(n/alpha).

    python scripts/tightness_table.py --n-max 16 --csv tightness.csv
"""

import argparse

from bestinv import ALPHA, tightness_sweep
from bestinv.optimize import write_sweep_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=16)
    ap.add_argument("--restarts", type=int, default=8)
    ap.add_argument("--iters", type=int, default=5000)
    ap.add_argument("--hops", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--warm-extremal", action="store_true")
    ap.add_argument("--csv")
    args = ap.parse_args()

    rows = tightness_sweep(args.n_max, args.restarts, args.iters, args.seed, args.hops,
                           args.warm_extremal, args.threads)
    print(f"{'n':>4} {'a_est':>14} {'alpha/n':>14} {'a_est*n/alpha':>14} {'b_est':>10} {'ratio':>10}")
    for r in rows:
        print(f"{r.n:4d} {r.a_est:14.10f} {ALPHA / r.n:14.10f} {r.a_est * r.n / ALPHA:14.8f} "
              f"{r.b_est:10.6f} {r.ratio:10.7f}{'  *' if r.n % 4 == 0 else ''}")
    print("* rows with 4 | n, where a_n = alpha/n is expected")
    if args.csv:
        write_sweep_csv(rows, args.csv)


if __name__ == "__main__":
    main()
