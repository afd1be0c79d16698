"""Certificate scan per n: how close the smallest M entry comes to zero.

    python scripts/lemma_scan_sweep.py --n-max 100 --trials 200
"""

import argparse

from bestinv.cli import lemma_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-min", type=int, default=3)
    ap.add_argument("--n-max", type=int, default=100)
    ap.add_argument("--step", type=int, default=1)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    total = 0
    print(f"{'n':>4} {'violations':>10} {'min entry (max over trials)':>28} {'chain':>6}")
    for n in range(args.n_min, args.n_max + 1, args.step):
        rep = lemma_scan(n, args.trials, args.seed + n)
        total += rep.violations + rep.chain_failures
        print(f"{n:4d} {rep.violations:10d} {rep.min_entry_max:28.3e} {rep.chain_failures:6d}")
    print("violations:", total)


if __name__ == "__main__":
    main()
