"""LASER-GCN forward pass and Jacobian sensitivity checks.

Layer update (row convention, ``X`` is ``n x width``)::

    X <- act( A0 X W0^T + sum_l Al X Wl^T )

with ``A0 = D~^-1/2 (A + I) D~^-1/2`` and ``Al[v, u] = (d_vl d_ul)^-1/2`` for
each directed level-``l`` record ``v -> u``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import UNREACHED, Graph, bfs_distances
from .snapshots import RelationalEdgeSet, SnapshotSequence

FD_STEP = 1e-5
ACTIVATIONS = ("relu", "identity")


@dataclass(frozen=True)
class RelationalDegrees:
    """``degrees[l][i]``: level-0 is ``1 + deg(i)``, higher levels are out-degrees floored at 1."""

    degrees: np.ndarray  # shape (L + 1, n)

    @classmethod
    def from_sequence(cls, seq: SnapshotSequence) -> "RelationalDegrees":
        rows = [1 + seq.base.degrees]
        rows += [np.maximum(rel.out_degrees(), 1) for rel in seq.levels]
        return cls(np.stack(rows).astype(np.float64))


@dataclass
class ModelWeights:
    layers: list  # per layer: array (L + 1, width, width)
    activation: str = "relu"

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")

    @property
    def T(self) -> int:
        return len(self.layers)

    @property
    def width(self) -> int:
        return self.layers[0].shape[-1]

    @property
    def num_levels(self) -> int:
        return self.layers[0].shape[0]

    @classmethod
    def identity(cls, T: int, levels: int, width: int, activation: str = "identity"):
        eye = np.broadcast_to(np.eye(width), (levels + 1, width, width)).copy()
        return cls([eye.copy() for _ in range(T)], activation)

    @classmethod
    def uniform(cls, T: int, levels: int, width: int, seed: int, activation: str = "relu"):
        a = np.sqrt(3.0 / width)
        gen = np.random.default_rng(seed)
        return cls([gen.uniform(-a, a, (levels + 1, width, width)) for _ in range(T)], activation)


def normalized_operators(seq: SnapshotSequence) -> list:
    """Dense propagation matrices ``[A0, A1, ..., AL]``."""
    g = seq.base
    deg = RelationalDegrees.from_sequence(seq).degrees
    a = g.adjacency().toarray() + np.eye(g.n)
    s0 = 1.0 / np.sqrt(deg[0])
    ops = [s0[:, None] * a * s0[None, :]]
    for ell, rel in enumerate(seq.levels, start=1):
        s = 1.0 / np.sqrt(deg[ell])
        op = np.zeros((g.n, g.n))
        d = rel.directed()
        if len(d):
            op[d[:, 0], d[:, 1]] = s[d[:, 0]] * s[d[:, 1]]
        ops.append(op)
    return ops


def _check(seq: SnapshotSequence, x: np.ndarray, w: ModelWeights) -> None:
    if x.ndim != 2 or x.shape[0] != seq.base.n:
        raise ValueError(f"features must be ({seq.base.n}, width), got {x.shape}")
    if x.shape[1] != w.width:
        raise ValueError(f"feature width {x.shape[1]} != weight width {w.width}")
    if w.num_levels != seq.L + 1:
        raise ValueError(f"weights cover {w.num_levels} levels, sequence has {seq.L + 1}")


def _preactivations(ops, x, w):
    pres = []
    h = x
    for layer in w.layers:
        pre = sum(op @ h @ wl.T for op, wl in zip(ops, layer))
        pres.append(pre)
        h = np.maximum(pre, 0.0) if w.activation == "relu" else pre
    return pres, h


def laser_gcn_forward(seq: SnapshotSequence, x: np.ndarray, w: ModelWeights) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    _check(seq, x, w)
    return _preactivations(normalized_operators(seq), x, w)[1]


def gcn_forward(g: Graph, x: np.ndarray, w: ModelWeights) -> np.ndarray:
    """Plain GCN: only the level-0 weights are used."""
    base_only = ModelWeights([layer[:1] for layer in w.layers], w.activation)
    return laser_gcn_forward(SnapshotSequence(g), x, base_only)


def exact_jacobian(seq: SnapshotSequence, x: np.ndarray, w: ModelWeights, v: int, u: int) -> np.ndarray:
    """``d x_v^(T) / d x_u^(0)`` by forward-mode chain rule (ReLU masks taken at ``x``)."""
    x = np.asarray(x, dtype=np.float64)
    _check(seq, x, w)
    ops = normalized_operators(seq)
    pres, _ = _preactivations(ops, x, w)
    n, width = x.shape
    jac = np.zeros((n, width, width))
    jac[u] = np.eye(width)
    for layer, pre in zip(w.layers, pres):
        jac = sum(np.einsum("ij,ab,jbc->iac", op, wl, jac) for op, wl in zip(ops, layer))
        if w.activation == "relu":
            jac = jac * (pre > 0)[:, :, None]
    return jac[v]


def jacobian_fd(
    seq: SnapshotSequence, x: np.ndarray, w: ModelWeights, v: int, u: int, h: float = FD_STEP
) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    width = x.shape[1]
    jac = np.zeros((width, width))
    for c in range(width):
        xp, xm = x.copy(), x.copy()
        xp[u, c] += h
        xm[u, c] -= h
        jac[:, c] = (laser_gcn_forward(seq, xp, w)[v] - laser_gcn_forward(seq, xm, w)[v]) / (2 * h)
    return jac


@dataclass(frozen=True)
class SensitivityConfig:
    rho_relu: float = 1.0
    source: int = 0
    target: int = 0
    layers: int = 1

    def __post_init__(self):
        if not 0.0 <= self.rho_relu <= 1.0:
            raise ValueError("rho_relu must be in [0, 1]")


def normalized_adjacency(g: Graph) -> np.ndarray:
    """``D^-1/2 A D^-1/2`` without self-loops (isolated nodes get zero rows)."""
    a = g.adjacency().toarray()
    deg = a.sum(axis=1)
    s = np.zeros_like(deg)
    s[deg > 0] = 1.0 / np.sqrt(deg[deg > 0])
    return s[:, None] * a * s[None, :]


def expected_jacobian_norm(g: Graph, v: int, u: int, layers: int, rho_relu: float = 1.0) -> float:
    """``rho * (A_hat^m)_{vu}`` under unit-norm weight products."""
    a = normalized_adjacency(g)
    return float(rho_relu * np.linalg.matrix_power(a, layers)[v, u])


def relational_entry(seq: SnapshotSequence, level: int, i: int, j: int) -> float:
    """Entry ``(A_hat_level)_{ij}`` used by the expected LASER Jacobian."""
    if level == 0:
        return float(normalized_adjacency(seq.base)[i, j])
    rel = seq.levels[level - 1]
    if j not in rel.targets[i]:
        return 0.0
    deg = np.maximum(rel.out_degrees(), 1)
    return float(1.0 / np.sqrt(deg[i] * deg[j]))


def expected_laser_jacobian_norm(
    seq: SnapshotSequence, v: int, j: int, u: int, shortcut: int, rho_relu: float = 1.0
) -> float:
    """Expected norm after ``r - shortcut + 1`` layers: one relational hop ``v -> j``, then plain hops."""
    r = int(bfs_distances(seq.base, v)[u])
    a = normalized_adjacency(seq.base)
    tail = np.linalg.matrix_power(a, r - shortcut)[j, u]
    return float(rho_relu * relational_entry(seq, shortcut - 1, v, j) * tail)


def count_shortest_paths(g: Graph, v: int) -> tuple:
    """BFS distances and shortest-path counts from ``v``."""
    dist = [UNREACHED] * g.n
    count = [0] * g.n
    dist[v], count[v] = 0, 1
    queue = deque([v])
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x).tolist():
            if dist[y] == UNREACHED:
                dist[y] = dist[x] + 1
                queue.append(y)
            if dist[y] == dist[x] + 1:
                count[y] += count[x]
    return dist, count


def unique_shortest_path(g: Graph, v: int, u: int) -> list:
    dist, count = count_shortest_paths(g, v)
    if dist[u] == UNREACHED:
        raise ValueError(f"{u} unreachable from {v}")
    if count[u] != 1:
        raise ValueError(f"{count[u]} shortest paths between {v} and {u}; need exactly one")
    path = [u]
    while path[-1] != v:
        x = path[-1]
        path.append(next(y for y in g.neighbors(x).tolist() if dist[y] == dist[x] - 1))
    return path[::-1]


def install_shortcut(g: Graph, v: int, j: int, shortcut: int) -> SnapshotSequence:
    """Sequence whose only relational record is ``v -> j`` at level ``shortcut - 1``."""
    levels = []
    for level in range(1, shortcut):
        targets = [()] * g.n
        if level == shortcut - 1:
            targets[v] = (j,)
        levels.append(RelationalEdgeSet(level, tuple(targets)))
    return SnapshotSequence(g, tuple(levels))


@dataclass(frozen=True)
class Prop1Result:
    lhs: float
    rhs: float
    holds: bool
    r: int
    j: int
    rhs_per_m: tuple


def prop1_check(g: Graph, v: int, u: int, shortcut: int, rho_relu: float = 1.0) -> Prop1Result:
    """Compare the LASER expected Jacobian with the scaled plain-GCN one for every ``m <= r``.

    ``shortcut`` is the distance ``d(v, j)`` of the installed edge, ``j``
    being the node at that distance on the unique shortest ``v``-``u`` path.
    """
    path = unique_shortest_path(g, v, u)
    r = len(path) - 1
    if not 1 <= shortcut < r:
        raise ValueError(f"shortcut distance must satisfy 1 <= l < r={r}")
    j = path[shortcut]
    seq = install_shortcut(g, v, j, shortcut)
    lhs = expected_laser_jacobian_norm(seq, v, j, u, shortcut, rho_relu)
    if shortcut == 1:
        dv, dj = g.degrees[v], g.degrees[j]
    else:
        deg = np.maximum(seq.levels[shortcut - 2].out_degrees(), 1)
        dv, dj = deg[v], deg[j]
    scale = float(g.degrees.min()) ** shortcut / np.sqrt(dv * dj)
    rhs_m = tuple(float(scale * expected_jacobian_norm(g, v, u, m, rho_relu)) for m in range(1, r + 1))
    rhs = max(rhs_m)
    return Prop1Result(lhs, rhs, bool(lhs >= rhs), r, j, rhs_m)
