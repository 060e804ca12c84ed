"""LASER sequential rewiring and a greedy spectral baseline."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import rng
from .graph import Graph, is_connected
from .measures import DEFAULT_WALK_K, MeasurePair, compute_mu_nu, resistance_matrix
from .snapshots import RelationalEdgeSet, SnapshotSequence

MODES = ("mu_guided", "uniform_random")


class AlreadyCompleteError(ValueError):
    pass


@dataclass(frozen=True)
class RewireConfig:
    L: int = 1
    rho_density: float = 0.5
    walk_k: int = DEFAULT_WALK_K
    seed: int = 0
    # > 0: ties in mu are broken uniformly at random (equivariant in expectation);
    # 0: ties are broken by node id.
    tie_sigma: float = 1e-9
    min_one: bool = True
    mode: str = "mu_guided"

    def __post_init__(self):
        if not 0.0 <= self.rho_density <= 1.0:
            raise ValueError(f"rho_density must be in [0, 1], got {self.rho_density}")
        if self.L < 0:
            raise ValueError("L must be >= 0")
        if self.walk_k < 1:
            raise ValueError("walk_k must be >= 1")
        if self.tie_sigma < 0:
            raise ValueError("tie_sigma must be >= 0")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")


@dataclass(frozen=True)
class Orbit:
    center: int
    radius: int
    members: np.ndarray


def round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def selection_count(size: int, rho: float, min_one: bool = True) -> int:
    if size == 0 or rho == 0:
        return 0
    k = round_half_away(rho * size)
    if min_one:
        k = max(k, 1)
    return min(k, size)


def orbit_of(locality: np.ndarray, v: int, r: int) -> Orbit:
    return Orbit(v, r, np.flatnonzero(locality[v] == r))


def select_from_orbit(
    members: np.ndarray,
    scores: np.ndarray,
    rho: float,
    min_one: bool = True,
    tiebreak: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Pick the ``round(rho * |orbit|)`` members with the lowest scores.

    ``tiebreak`` holds one uniform key per member; equal scores are ordered
    by it, which selects uniformly among tied candidates at the boundary.
    Without it ties fall back to member order.
    """
    members = np.asarray(members)
    k = selection_count(len(members), rho, min_one)
    if k == 0:
        return members[:0]
    if tiebreak is None:
        order = np.lexsort((members, scores))
    else:
        order = np.lexsort((members, tiebreak, scores))
    return np.sort(members[order[:k]])


def rewire_level(g: Graph, measures: MeasurePair, r: int, config: RewireConfig) -> RelationalEdgeSet:
    """Per-node selections from the radius-``r`` orbits, tagged level ``r - 1``."""
    if r > measures.horizon:
        raise ValueError(f"radius {r} beyond locality horizon {measures.horizon}")
    level = r - 1
    random_mode = config.mode == "uniform_random"
    targets = []
    for v in range(g.n):
        members = np.flatnonzero(measures.locality[v] == r)
        if len(members) == 0:
            targets.append(())
            continue
        if random_mode:
            scores = np.zeros(len(members))
        else:
            scores = measures.connectivity[v, members]
        keys = None
        if random_mode or config.tie_sigma > 0:
            keys = rng.uniform(config.seed, level, v, members)
        chosen = select_from_orbit(members, scores, config.rho_density, config.min_one, keys)
        targets.append(tuple(chosen.tolist()))
    return RelationalEdgeSet(level, tuple(targets))


def laser_rewire(
    g: Graph, config: RewireConfig, measures: Optional[MeasurePair] = None
) -> SnapshotSequence:
    """Snapshot levels ``1..L``; level ``l`` joins nodes at original distance ``l + 1``.

    Measures are computed once on the input graph and shared by all levels.
    """
    if config.L == 0 or config.rho_density == 0:
        return SnapshotSequence(g, (), config_dict(config))
    if not is_connected(g):
        warnings.warn("graph is disconnected; rewiring proceeds within components", stacklevel=2)
    if measures is None:
        measures = compute_mu_nu(g, config.L + 1, config.walk_k)
    levels = tuple(rewire_level(g, measures, ell + 1, config) for ell in range(1, config.L + 1))
    return SnapshotSequence(g, levels, config_dict(config))


def config_dict(config: RewireConfig) -> dict:
    return {
        "L": config.L,
        "rho_density": config.rho_density,
        "walk_k": config.walk_k,
        "seed": config.seed,
        "tie_sigma": config.tie_sigma,
        "min_one": config.min_one,
        "mode": config.mode,
    }


def max_resistance_pair(g: Graph, rtol: float = 1e-9) -> tuple:
    """Non-adjacent pair with the largest effective resistance, smallest ids on ties."""
    res = resistance_matrix(g)
    mask = np.triu(np.ones((g.n, g.n), dtype=bool), k=1)
    mask &= g.adjacency().toarray() == 0
    if not mask.any():
        raise AlreadyCompleteError("graph is complete; no edge can be added")
    vals = np.where(mask, res, -np.inf)
    best = vals.max()
    cand = np.argwhere(vals >= best - rtol * abs(best))
    u, v = cand[0]  # argwhere is row-major, hence lexicographic
    return int(u), int(v)


def spectral_greedy_add(g: Graph, num_edges: int) -> Graph:
    if num_edges < 1:
        raise ValueError("num_edges must be >= 1")
    for _ in range(num_edges):
        g = g.add_edges([max_resistance_pair(g)])
    return g
