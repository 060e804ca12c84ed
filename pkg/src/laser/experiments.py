"""Report builders shared by the CLI and scripts/."""

from __future__ import annotations

import hashlib
import math
import time
from dataclasses import asdict
from typing import Optional

import numpy as np

from .generators import erdos_renyi_graph, lollipop_graph
from .graph import Graph, distance_matrix, is_connected
from .measures import (
    MetricsReport,
    compute_mu_nu,
    frobenius_deviation,
    spectral_gap,
    total_effective_resistance,
)
from .rewire import RewireConfig, laser_rewire, max_resistance_pair, rewire_level, spectral_greedy_add
from .snapshots import SnapshotSequence, flatten_snapshots


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1e3


def metrics_report(g: Graph, seq: Optional[SnapshotSequence] = None) -> MetricsReport:
    """Spectral gap, total ER and distance deviation for ``G_0..G_L``."""
    seq = seq if seq is not None else SnapshotSequence(g)
    warnings = []
    timings = {}
    connected = is_connected(g)

    t0 = time.perf_counter()
    graphs = [flatten_snapshots(seq, ell) for ell in range(seq.L + 1)]
    timings["flatten"] = _ms(t0)

    t0 = time.perf_counter()
    gaps = []
    for h in graphs:
        try:
            gaps.append(spectral_gap(h))
        except ValueError as exc:
            gaps.append(None)
            warnings.append(f"spectral_gap: {exc}")
    timings["spectral_gap"] = _ms(t0)

    t0 = time.perf_counter()
    if connected:
        ers = [total_effective_resistance(h) for h in graphs]
    else:
        ers = [None] * len(graphs)
        warnings.append("graph is disconnected; total effective resistance not reported")
    timings["total_er"] = _ms(t0)

    t0 = time.perf_counter()
    frob = []
    if connected:
        d0 = distance_matrix(g)
        frob = [frobenius_deviation(d0, distance_matrix(h)) for h in graphs]
    else:
        warnings.append("graph is disconnected; distance deviation not reported")
    timings["frobenius"] = _ms(t0)

    return MetricsReport(
        n=g.n,
        m=g.m,
        spectral_gap=gaps[0],
        total_er=ers[0],
        frobenius_per_level=frob,
        added_edges_per_level=seq.added_edges_per_level(),
        total_er_per_level=ers,
        spectral_gap_per_level=gaps,
        timings_ms=timings,
        warnings=warnings,
    )


def lollipop_bound(chain: int, clique: int) -> float:
    """Lower bound on the deviation caused by one chain-end-to-clique edge."""
    return math.sqrt((clique - 1) * (chain - 1) ** 2 + (chain - 2) ** 2)


def lollipop_ablation(chain: int, clique: int, rho: Optional[float] = None, seeds: int = 20, seed: int = 0) -> dict:
    """One max-resistance edge versus a single sparse LASER snapshot on a lollipop."""
    if rho is None:
        rho = 1.0 / (2.0 * math.sqrt(chain))
    g = lollipop_graph(chain, clique)
    d0 = distance_matrix(g)

    t0 = time.perf_counter()
    edge = max_resistance_pair(g)
    spectral = frobenius_deviation(d0, distance_matrix(spectral_greedy_add(g, 1)))
    t_spec = _ms(t0)

    t0 = time.perf_counter()
    measures = compute_mu_nu(g, 2)
    devs, added = [], []
    for i in range(seeds):
        cfg = RewireConfig(L=1, rho_density=rho, seed=seed + i, min_one=False)
        seq = laser_rewire(g, cfg, measures)
        devs.append(frobenius_deviation(d0, distance_matrix(flatten_snapshots(seq))))
        added.append(seq.added_edges_per_level()[0])
    t_laser = _ms(t0)

    laser_mean = float(np.mean(devs))
    return {
        "chain": chain,
        "clique_size": clique,
        "rho": rho,
        "seeds": seeds,
        "spectral_edge": list(edge),
        "spectral_edge_touches_chain_end": 0 in edge,
        "spectral_deviation": spectral,
        "spectral_lower_bound": lollipop_bound(chain, clique),
        "laser_deviation_mean": laser_mean,
        "laser_deviation_std": float(np.std(devs)),
        "laser_added_edges_mean": float(np.mean(added)),
        "laser_better": laser_mean < spectral,
        "timings_ms": {"spectral": t_spec, "laser": t_laser},
    }


def edges_digest(edges: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(edges, dtype=np.int64).tobytes()).hexdigest()


def er_benchmark(
    nodes: int, avg_degree: float = 10.0, seed: int = 0, L: int = 1, rho: float = 0.5, walk_k: int = 8
) -> dict:
    """Time generation, measure computation and selection separately."""
    timings = {}
    t0 = time.perf_counter()
    g = erdos_renyi_graph(nodes, avg_degree / nodes, seed)
    timings["generate"] = _ms(t0)

    cfg = RewireConfig(L=L, rho_density=rho, walk_k=walk_k, seed=seed)
    t0 = time.perf_counter()
    measures = compute_mu_nu(g, L + 1, walk_k)
    timings["measures"] = _ms(t0)

    t0 = time.perf_counter()
    levels = [rewire_level(g, measures, ell + 1, cfg) for ell in range(1, L + 1)]
    timings["selection"] = _ms(t0)
    del measures

    seq = SnapshotSequence(g, tuple(levels), asdict(cfg))
    directed = [rel.directed() for rel in levels]
    return {
        "n": g.n,
        "m": g.m,
        "config": asdict(cfg),
        "directed_added_per_level": [len(d) for d in directed],
        "added_edges_per_level": seq.added_edges_per_level(),
        "added_edges_sha256": edges_digest(np.concatenate(directed)) if directed else edges_digest(np.zeros((0, 2))),
        "timings_ms": timings,
    }
