"""Connectivity/locality measures and graph evaluation metrics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .graph import DIST_DTYPE, UNREACHED, Graph, is_connected, walk_count_matrix

PINV_CUTOFF = 1e-10
DEFAULT_WALK_K = 8


class DisconnectedGraphError(ValueError):
    pass


@dataclass(frozen=True)
class MeasurePair:
    """Locality ``D`` (exact distances up to ``horizon``) and connectivity ``M = (A+I)^k``."""

    locality: np.ndarray
    connectivity: np.ndarray
    horizon: int
    walk_k: int


def locality_matrix(g: Graph, horizon: int) -> np.ndarray:
    """Distances up to ``horizon`` from clipped reachability powers of ``A + I``."""
    n = g.n
    at = (g.adjacency() + sp.identity(n, format="csr")).tocsr()
    reach = at.copy()
    reach.data[:] = 1.0
    dist = np.full((n, n), UNREACHED, dtype=DIST_DTYPE)
    np.fill_diagonal(dist, 0)
    r1, c1 = g.adjacency().nonzero()
    dist[r1, c1] = 1
    for r in range(2, horizon + 1):
        nxt = (reach @ at).tocsr()
        nxt.data[:] = 1.0  # clip
        frontier = (nxt - reach).tocoo()
        sel = frontier.data > 0
        if not np.any(sel):
            break
        dist[frontier.row[sel], frontier.col[sel]] = r
        reach = nxt
    return dist


def compute_mu_nu(g: Graph, horizon: int, walk_k: int = DEFAULT_WALK_K) -> MeasurePair:
    if horizon < 1 or walk_k < 1:
        raise ValueError("horizon and walk_k must be >= 1")
    loc = locality_matrix(g, horizon)
    loc.setflags(write=False)
    return MeasurePair(loc, walk_count_matrix(g, walk_k), horizon, walk_k)


def laplacian(g: Graph) -> np.ndarray:
    a = g.adjacency().toarray()
    return np.diag(a.sum(axis=1)) - a


def laplacian_pinv(g: Graph) -> np.ndarray:
    """Moore-Penrose pseudoinverse of ``D - A`` via symmetric eigendecomposition."""
    w, v = np.linalg.eigh(laplacian(g))
    inv = np.zeros_like(w)
    keep = w > PINV_CUTOFF
    inv[keep] = 1.0 / w[keep]
    return (v * inv) @ v.T


def _require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise DisconnectedGraphError("effective resistance needs a connected graph")


def resistance_matrix(g: Graph, pinv: Optional[np.ndarray] = None) -> np.ndarray:
    """All-pairs effective resistance ``L+_uu + L+_vv - 2 L+_uv``."""
    if pinv is None:
        _require_connected(g)
        pinv = laplacian_pinv(g)
    d = np.diag(pinv)
    return d[:, None] + d[None, :] - 2.0 * pinv


def effective_resistance(g: Graph, u: int, v: int) -> float:
    if u == v:
        return 0.0
    _require_connected(g)
    lp = laplacian_pinv(g)
    return float(lp[u, u] + lp[v, v] - 2.0 * lp[u, v])


def commute_time(g: Graph, u: int, v: int) -> float:
    return 2.0 * g.m * effective_resistance(g, u, v)


def total_effective_resistance(g: Graph) -> float:
    """Sum of ``R(u, v)`` over unordered pairs, as ``n * trace(L+)``."""
    _require_connected(g)
    return float(g.n * np.trace(laplacian_pinv(g)))


def spectral_gap(g: Graph) -> float:
    """Second-smallest eigenvalue of ``I - D^-1/2 A D^-1/2``."""
    if g.n < 2:
        raise ValueError("spectral gap needs n >= 2")
    deg = g.degrees.astype(np.float64)
    if np.any(deg == 0):
        raise ValueError("spectral gap undefined with isolated nodes")
    s = 1.0 / np.sqrt(deg)
    a = g.adjacency().toarray()
    lap = np.eye(g.n) - s[:, None] * a * s[None, :]
    return float(np.linalg.eigvalsh(lap)[1])


def frobenius_deviation(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    if np.any(a == UNREACHED) or np.any(b == UNREACHED):
        raise ValueError("distance matrices must be fully finite")
    diff = a.astype(np.float64) - b.astype(np.float64)
    return float(np.sqrt(np.sum(diff * diff)))


@dataclass
class MetricsReport:
    n: int
    m: int
    spectral_gap: Optional[float]
    total_er: Optional[float]
    frobenius_per_level: list = field(default_factory=list)
    added_edges_per_level: list = field(default_factory=list)
    total_er_per_level: list = field(default_factory=list)
    spectral_gap_per_level: list = field(default_factory=list)
    timings_ms: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
