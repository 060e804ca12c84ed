"""Distance-matrix deviation of one max-resistance edge vs a sparse LASER snapshot on lollipops.

    python scripts/lollipop_sweep.py --chains 8 10 12 16 --clique-size 64 --seeds 20
"""

import argparse
import math

from laser.experiments import lollipop_ablation


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--chains", type=int, nargs="+", default=[8, 10, 12, 16])
    ap.add_argument("--clique-size", type=int, default=64)
    ap.add_argument("--seeds", type=int, default=20)
    args = ap.parse_args()

    print(f"{'L':>4} {'rho':>8} {'spectral':>10} {'bound':>10} {'laser':>10} {'+-':>7} {'added':>6}")
    for chain in args.chains:
        for rho in (1 / chain, 1 / (2 * math.sqrt(chain))):
            r = lollipop_ablation(chain, args.clique_size, rho, args.seeds)
            print(
                f"{chain:>4} {rho:>8.4f} {r['spectral_deviation']:>10.2f} {r['spectral_lower_bound']:>10.2f} "
                f"{r['laser_deviation_mean']:>10.2f} {r['laser_deviation_std']:>7.2f} {r['laser_added_edges_mean']:>6.1f}"
            )


if __name__ == "__main__":
    main()
