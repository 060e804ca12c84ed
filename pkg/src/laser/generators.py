"""Deterministic test-graph generators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import rng
from .graph import Graph

KINDS = ("path", "cycle", "clique", "lollipop", "erdos_renyi")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    nodes: int = 0
    chain: int = 0
    p: Optional[float] = None
    avg_degree: Optional[float] = None
    seed: int = 0

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "lollipop":
            if self.chain < 1:
                raise ValueError("lollipop needs chain length >= 1")
            if self.nodes < 3:
                raise ValueError("lollipop needs clique size >= 3")
            return
        if self.nodes < 1:
            raise ValueError("nodes must be >= 1")
        if self.kind == "cycle" and self.nodes < 3:
            raise ValueError("cycle needs >= 3 nodes")
        if self.kind == "erdos_renyi":
            p = self.edge_probability
            if not 0 < p <= 1:
                raise ValueError(f"edge probability must be in (0, 1], got {p}")

    @property
    def edge_probability(self) -> float:
        if self.p is not None:
            return float(self.p)
        if self.avg_degree is not None:
            return float(self.avg_degree) / self.nodes
        raise ValueError("erdos_renyi needs p or avg_degree")


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def lollipop_graph(chain: int, clique: int) -> Graph:
    """Chain ``0..chain-1`` hanging off clique nodes ``chain..chain+clique-1``.

    Node 0 is the free chain end, node ``chain`` is the junction shared with
    the clique, so ``d(0, chain) = chain`` and interior clique nodes sit at
    distance ``chain + 1``.
    """
    edges = [(i, i + 1) for i in range(chain)]
    edges += [(i, j) for i in range(chain, chain + clique) for j in range(i + 1, chain + clique)]
    return Graph.from_edges(chain + clique, edges)


def erdos_renyi_graph(n: int, p: float, seed: int) -> Graph:
    # each pair (i, j) is an independent keyed draw, so chunking is irrelevant
    chunks = []
    for i in range(n - 1):
        j = np.arange(i + 1, n)
        hit = j[rng.uniform(seed, i, j) < p]
        if len(hit):
            chunks.append(np.stack([np.full(len(hit), i), hit], axis=1))
    edges = np.concatenate(chunks) if chunks else np.zeros((0, 2), dtype=np.int64)
    return Graph.from_edges(n, edges)


def generate(spec: GeneratorSpec) -> Graph:
    spec.validate()
    if spec.kind == "path":
        return path_graph(spec.nodes)
    if spec.kind == "cycle":
        return cycle_graph(spec.nodes)
    if spec.kind == "clique":
        return complete_graph(spec.nodes)
    if spec.kind == "lollipop":
        return lollipop_graph(spec.chain, spec.nodes)
    return erdos_renyi_graph(spec.nodes, spec.edge_probability, spec.seed)
