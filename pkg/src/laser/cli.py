"""Command-line entry point: ``laser <subcommand> ...``."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import os
import shutil
import sys
import tempfile
import time
from dataclasses import asdict
from typing import Optional

import numpy as np

from . import __version__
from .experiments import er_benchmark, lollipop_ablation, metrics_report
from .generators import GeneratorSpec, generate, path_graph
from .graph import EdgeListError, read_edge_list, to_edge_list
from .rewire import RewireConfig, laser_rewire
from .sensitivity import (
    ModelWeights,
    exact_jacobian,
    expected_jacobian_norm,
    install_shortcut,
    jacobian_fd,
    prop1_check,
)
from .snapshots import read_snapshot_dir, write_snapshot_dir

log = logging.getLogger("laser")

MODE_FLAGS = {"mu": "mu_guided", "random": "uniform_random"}


class UsageError(Exception):
    pass


def _round(obj):
    """Floats to 12 significant digits, numpy scalars to Python."""
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(f"{x:.12g}")
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_round(obj), indent=2, sort_keys=True) + "\n"


def file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def manifest(command: str, config: dict, inputs: list, seed, timings: dict) -> dict:
    return {
        "command": command,
        "config": config,
        "inputs": {p: file_digest(p) for p in inputs},
        "seed": seed,
        "version": __version__,
        "timings_ms": timings,
    }


def write_text_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(report: dict, out: Optional[str]) -> None:
    text = dumps(report)
    if out:
        write_text_atomic(out, text)
    else:
        sys.stdout.write(text)


def _load(path: str):
    try:
        return read_edge_list(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except EdgeListError as exc:
        raise UsageError(f"{path}: {exc}") from None


# -- subcommands -------------------------------------------------------------


def cmd_gen(args) -> int:
    kind = args.kind.replace("-", "_")
    nodes = args.clique_size if kind == "lollipop" else args.nodes
    spec = GeneratorSpec(
        kind=kind,
        nodes=nodes or 0,
        chain=args.chain or 0,
        p=args.p,
        avg_degree=args.avg_degree,
        seed=args.seed,
    )
    t0 = time.perf_counter()
    try:
        g = generate(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ms = (time.perf_counter() - t0) * 1e3
    text = to_edge_list(g)
    man = manifest("gen", asdict(spec), [], args.seed, {"generate": ms})
    man.update({"n": g.n, "m": g.m, "output": os.path.basename(args.out)})
    manifest_path = args.out + ".manifest.json"
    try:
        write_text_atomic(args.out, text)
        write_text_atomic(manifest_path, dumps(man))
    except BaseException:
        for p in (args.out, manifest_path):
            if os.path.exists(p):
                os.unlink(p)
        raise
    log.info("wrote %s (n=%d, m=%d)", args.out, g.n, g.m)
    return 0


def cmd_rewire(args) -> int:
    if not 0.0 <= args.rho <= 1.0:
        raise UsageError(f"--rho must be in [0, 1], got {args.rho}")
    g = _load(args.input)
    cfg = RewireConfig(
        L=args.snapshots,
        rho_density=args.rho,
        walk_k=args.walk_k,
        seed=args.seed,
        tie_sigma=args.tie_sigma,
        min_one=not args.no_min_one,
        mode=MODE_FLAGS[args.mode],
    )
    t0 = time.perf_counter()
    seq = laser_rewire(g, cfg)
    ms = (time.perf_counter() - t0) * 1e3
    extra = manifest("rewire", asdict(cfg), [args.input], args.seed, {"rewire": ms})
    extra["rewiring_disabled"] = seq.L == 0
    _write_dir(args.out, lambda tmp: write_snapshot_dir(seq, tmp, _round(extra)))
    log.info("wrote %d levels to %s", seq.L, args.out)
    return 0


def _write_dir(out: str, writer) -> None:
    """Build the directory next to ``out`` and move it into place on success."""
    out = os.path.abspath(out)
    if os.path.isdir(out) and os.listdir(out) and not os.path.exists(os.path.join(out, "manifest.json")):
        raise UsageError(f"{out} exists and is not a previous output directory")
    parent = os.path.dirname(out)
    os.makedirs(parent, exist_ok=True)
    tmp = tempfile.mkdtemp(dir=parent, prefix=".tmp-")
    try:
        writer(tmp)
        if os.path.isdir(out):
            shutil.rmtree(out)
        os.replace(tmp, out)
    finally:
        if os.path.isdir(tmp):
            shutil.rmtree(tmp)


def cmd_metrics(args) -> int:
    g = _load(args.input)
    seq = read_snapshot_dir(args.rewired, g) if args.rewired else None
    report = asdict(metrics_report(g, seq))
    if report["warnings"]:
        report["warning"] = "; ".join(report["warnings"])
    emit(report, args.out)
    return 0


def cmd_ablate(args) -> int:
    if args.target != "lollipop":
        raise UsageError(f"unknown ablation {args.target!r}")
    report = lollipop_ablation(args.chain, args.clique_size, args.rho, args.seeds, args.seed)
    emit(report, args.out)
    return 0


def cmd_bench(args) -> int:
    report = er_benchmark(args.nodes, args.avg_degree, args.seed, args.snapshots, args.rho, args.walk_k)
    emit(report, args.out)
    return 0


def cmd_sensitivity(args) -> int:
    g = _load(args.input) if args.input else path_graph(args.nodes)
    v, u = args.source, args.target if args.target is not None else g.n - 1
    try:
        res = prop1_check(g, v, u, args.shortcut, args.rho_relu)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    layers = args.layers if args.layers is not None else res.r - args.shortcut + 1
    seq = install_shortcut(g, v, res.j, args.shortcut)
    w = ModelWeights.identity(layers, seq.L, args.width, "identity")
    x = np.random.default_rng(args.seed).standard_normal((g.n, args.width))
    jac = jacobian_fd(seq, x, w, v, u)
    exact = exact_jacobian(seq, x, w, v, u)
    report = {
        "source": v,
        "target": u,
        "layers": layers,
        "shortcut_distance": args.shortcut,
        "shortcut_node": res.j,
        "jacobian_norm": float(np.linalg.norm(jac, 2)),
        "jacobian_norm_exact": float(np.linalg.norm(exact, 2)),
        "expected_norm": expected_jacobian_norm(g, v, u, res.r, args.rho_relu),
        "prop1": {"lhs": res.lhs, "rhs": res.rhs, "holds": res.holds},
    }
    emit(report, args.out)
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="laser", description="Locality-aware sequential graph rewiring.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a test graph as an edge list")
    g.add_argument("--kind", required=True, choices=["path", "cycle", "clique", "lollipop", "erdos-renyi"])
    g.add_argument("--nodes", type=int)
    g.add_argument("--chain", type=int)
    g.add_argument("--clique-size", type=int)
    g.add_argument("--p", type=float)
    g.add_argument("--avg-degree", type=float)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("rewire", help="build a LASER snapshot sequence")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--snapshots", type=int, default=1)
    r.add_argument("--rho", type=float, default=0.5)
    r.add_argument("--walk-k", type=int, default=8)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--mode", choices=sorted(MODE_FLAGS), default="mu")
    r.add_argument("--tie-sigma", type=float, default=1e-9)
    r.add_argument("--no-min-one", action="store_true")
    r.set_defaults(func=cmd_rewire)

    m = sub.add_parser("metrics", help="spectral gap, total ER and distance deviation")
    m.add_argument("--in", dest="input", required=True)
    m.add_argument("--rewired")
    m.add_argument("--out")
    m.add_argument("--seed", type=int, default=0)
    m.set_defaults(func=cmd_metrics)

    a = sub.add_parser("ablate", help="locality ablations")
    a.add_argument("target", choices=["lollipop"])
    a.add_argument("--chain", type=int, default=12)
    a.add_argument("--clique-size", type=int, default=64)
    a.add_argument("--rho", type=float)
    a.add_argument("--seeds", type=int, default=20)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out")
    a.set_defaults(func=cmd_ablate)

    b = sub.add_parser("bench", help="Erdos-Renyi rewiring timing")
    b.add_argument("--nodes", type=int, default=10000)
    b.add_argument("--avg-degree", type=float, default=10.0)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--snapshots", type=int, default=1)
    b.add_argument("--rho", type=float, default=0.5)
    b.add_argument("--walk-k", type=int, default=8)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    s = sub.add_parser("sensitivity", help="Jacobian sensitivity with one shortcut edge")
    s.add_argument("--in", dest="input")
    s.add_argument("--nodes", type=int, default=7, help="path length when --in is absent")
    s.add_argument("--source", type=int, default=0)
    s.add_argument("--target", type=int)
    s.add_argument("--shortcut", type=int, default=2)
    s.add_argument("--layers", type=int)
    s.add_argument("--rho-relu", type=float, default=1.0)
    s.add_argument("--width", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sensitivity)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    return 1


if __name__ == "__main__":
    sys.exit(main())
