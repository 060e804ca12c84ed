"""Rewiring wall-clock on Erdos-Renyi graphs (rho = 0.5, one snapshot, k = 8).

    python scripts/er_scaling.py --nodes 1000 2500 5000 10000
"""

import argparse
import json

from laser.experiments import er_benchmark


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, nargs="+", default=[1000, 2500, 5000, 10000])
    ap.add_argument("--avg-degree", type=float, default=10.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for n in args.nodes:
        rep = er_benchmark(n, args.avg_degree, args.seed)
        t = rep["timings_ms"]
        print(json.dumps({"n": n, "m": rep["m"], "added": rep["added_edges_per_level"],
                          "measures_s": round(t["measures"] / 1e3, 2), "selection_s": round(t["selection"] / 1e3, 2)}))


if __name__ == "__main__":
    main()
