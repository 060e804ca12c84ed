"""Connectivity vs locality over snapshots on Erdos-Renyi graphs.

For LASER (rho = 0.1 and rho = 1) reports mean total effective resistance and
distance-matrix deviation per snapshot count; the greedy max-resistance
baseline is run with a growing edge budget for comparison.

    python scripts/snapshot_ablation.py --nodes 150 --graphs 5
"""

import argparse

import numpy as np

from laser.generators import erdos_renyi_graph
from laser.graph import distance_matrix, is_connected
from laser.measures import frobenius_deviation, total_effective_resistance
from laser.rewire import RewireConfig, laser_rewire, spectral_greedy_add
from laser.snapshots import flatten_snapshots


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, default=150)
    ap.add_argument("--avg-degree", type=float, default=3.0)
    ap.add_argument("--graphs", type=int, default=5)
    ap.add_argument("--max-snapshots", type=int, default=5)
    ap.add_argument("--budgets", type=int, nargs="+", default=[10, 20, 50])
    args = ap.parse_args()

    graphs, seed = [], 0
    while len(graphs) < args.graphs:
        g = erdos_renyi_graph(args.nodes, args.avg_degree / args.nodes, seed)
        if is_connected(g):
            graphs.append(g)
        seed += 1

    print(f"{'method':<16} {'param':>6} {'total ER':>12} {'||D-D_R||_F':>12} {'added':>8}")
    for rho in (0.1, 1.0):
        seqs = [laser_rewire(g, RewireConfig(L=args.max_snapshots, rho_density=rho, seed=i)) for i, g in enumerate(graphs)]
        for L in range(1, args.max_snapshots + 1):
            er, fro, added = [], [], []
            for g, seq in zip(graphs, seqs):
                h = flatten_snapshots(seq, L)
                er.append(total_effective_resistance(h))
                fro.append(frobenius_deviation(distance_matrix(g), distance_matrix(h)))
                added.append(h.m - g.m)
            print(f"{'laser rho=' + str(rho):<16} {L:>6} {np.mean(er):>12.2f} {np.mean(fro):>12.2f} {np.mean(added):>8.1f}")
    for budget in args.budgets:
        er, fro = [], []
        for g in graphs:
            h = spectral_greedy_add(g, budget)
            er.append(total_effective_resistance(h))
            fro.append(frobenius_deviation(distance_matrix(g), distance_matrix(h)))
        print(f"{'greedy max-R':<16} {budget:>6} {np.mean(er):>12.2f} {np.mean(fro):>12.2f} {budget:>8}")


if __name__ == "__main__":
    main()
