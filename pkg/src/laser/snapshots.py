"""Relational edge sets and snapshot sequences produced by rewiring."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, is_dataclass
from typing import Any, Optional

import numpy as np

from .graph import Graph


@dataclass(frozen=True)
class RelationalEdgeSet:
    """Edges added at one snapshot level, stored per source.

    ``targets[v]`` lists the nodes selected from ``v``'s orbit at radius
    ``level + 1``.  The directed records are kept because the layer update
    sums over each node's own selections.
    """

    level: int
    targets: tuple  # tuple of int tuples, one per node

    @property
    def n(self) -> int:
        return len(self.targets)

    def directed(self) -> np.ndarray:
        """``(k, 2)`` array of directed ``(source, target)`` records."""
        src = [v for v, ts in enumerate(self.targets) for _ in ts]
        dst = [u for ts in self.targets for u in ts]
        return np.array([src, dst], dtype=np.int64).T.reshape(-1, 2)

    def undirected(self) -> np.ndarray:
        """Symmetrized union as sorted unique ``u < v`` pairs."""
        d = self.directed()
        if len(d) == 0:
            return d
        return np.unique(np.sort(d, axis=1), axis=0)

    def out_degrees(self) -> np.ndarray:
        return np.array([len(t) for t in self.targets], dtype=np.int64)

    @property
    def num_directed(self) -> int:
        return sum(len(t) for t in self.targets)

    @property
    def num_undirected(self) -> int:
        return len(self.undirected())


@dataclass(frozen=True)
class SnapshotSequence:
    base: Graph
    levels: tuple = ()
    config: dict = field(default_factory=dict)

    @property
    def L(self) -> int:
        return len(self.levels)

    def added_edges_per_level(self) -> list:
        """Undirected edges added per level, each pair counted once."""
        return [len(new) for new in _new_pairs_per_level(self)]


def _new_pairs_per_level(seq: SnapshotSequence) -> list:
    seen = {tuple(e) for e in seq.base.edges().tolist()}
    out = []
    for rel in seq.levels:
        new = [p for p in map(tuple, rel.undirected().tolist()) if p not in seen]
        seen.update(new)
        out.append(new)
    return out


def flatten_snapshots(seq: SnapshotSequence, up_to: Optional[int] = None) -> Graph:
    """Undirected graph ``G_l``: base edges plus symmetrized levels ``1..up_to``."""
    if up_to is None:
        up_to = seq.L
    if not 0 <= up_to <= seq.L:
        raise ValueError(f"level {up_to} outside 0..{seq.L}")
    if up_to == 0:
        return seq.base
    extra = [rel.undirected() for rel in seq.levels[:up_to]]
    return seq.base.add_edges(np.concatenate(extra))


def _jsonable(obj: Any) -> Any:
    if is_dataclass(obj):
        return asdict(obj)
    return obj


def write_snapshot_dir(seq: SnapshotSequence, path: str, extra: Optional[dict] = None) -> dict:
    """Write ``snapshot_<l>.edges`` (``u v l`` directed records) and ``manifest.json``."""
    os.makedirs(path, exist_ok=True)
    levels = []
    for rel in seq.levels:
        fname = f"snapshot_{rel.level}.edges"
        with open(os.path.join(path, fname), "w", encoding="utf-8") as fh:
            for u, v in rel.directed().tolist():
                fh.write(f"{u} {v} {rel.level}\n")
        levels.append(
            {
                "level": rel.level,
                "directed_added": rel.num_directed,
                "undirected_added": rel.num_undirected,
                "file": fname,
            }
        )
    manifest = {"n": seq.base.n, "m": seq.base.m, "config": _jsonable(seq.config), "levels": levels}
    if extra:
        manifest.update(extra)
    with open(os.path.join(path, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def read_snapshot_dir(path: str, base: Graph) -> SnapshotSequence:
    with open(os.path.join(path, "manifest.json"), encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest["n"] != base.n:
        raise ValueError(f"manifest n={manifest['n']} does not match graph n={base.n}")
    levels = []
    for entry in sorted(manifest["levels"], key=lambda e: e["level"]):
        targets = [[] for _ in range(base.n)]
        with open(os.path.join(path, entry["file"]), encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    u, v, _ = map(int, line.split())
                    targets[u].append(v)
        levels.append(RelationalEdgeSet(entry["level"], tuple(tuple(t) for t in targets)))
    return SnapshotSequence(base, tuple(levels), manifest.get("config", {}))
