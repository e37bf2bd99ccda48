"""Command-line driver for reproducible ranking experiments.

Subcommands compose the library into pipelines that write plot-ready CSV
(default) or JSON tables to stdout or a file. All randomness flows through
the explicit --seed flag, so rerunning a command with identical flags
produces byte-identical output.

Exit codes: 0 success, 2 input file not found, 3 graph parse error,
4 invalid parameters.
"""

from __future__ import annotations

import os

if os.environ.get("QRANK_THREADS"):  # cap BLAS pools before numpy loads
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, os.environ["QRANK_THREADS"])

import argparse
import sys
from typing import Optional

import numpy as np

from . import analysis, formats
from .graph import (DirectedGraph, GeneratorParams, GraphFormatError,
                    benchmark_graph, generate, graph_digest, parse_edge_list,
                    parse_pajek, to_edge_list)
from .pagerank import (DEFAULT_ALPHA, DEFAULT_TOL, classical_pagerank,
                       hyperlink_matrix, patch_dangling, power_method)
from .szegedy import DEFAULT_STEPS, quantum_pagerank, quantum_rank_series


class UsageError(ValueError):
    """Invalid command-line parameters (exit code 4)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_GEN_ALIASES = {
    "scalefree": "scalefree", "scale-free": "scalefree", "sf": "scalefree",
    "hierarchical": "hierarchical", "hier": "hierarchical",
    "tree": "tree", "binarytree": "tree",
}


def _add_common(p: _Parser, steps_default: int = DEFAULT_STEPS):
    p.add_argument("--input", help="graph file (edge list or Pajek, sniffed)")
    p.add_argument("--gen", help="generator spec family:size (scalefree, hierarchical, tree)")
    p.add_argument("--benchmark", help="benchmark graph name (fig1a..fig1d, fig2b)")
    p.add_argument("--seed", type=int, default=0, help="seed for generated graphs")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="damping parameter")
    p.add_argument("--steps", type=int, default=steps_default, help="quantum walk two-steps")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="power-method tolerance")
    p.add_argument("--backend", choices=("auto", "direct", "spectral"), default="auto",
                   help="quantum evolution backend")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    p.add_argument("--output", help="output path (default: stdout)")


def build_parser() -> _Parser:
    parser = _Parser(prog="qprank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("gen", help="emit a graph"))
    rank = sub.add_parser("rank", help="classical PageRank")
    _add_common(rank)
    rank.add_argument("--bare", nargs="?", const="e", choices=("e", "h"),
                      help="skip damping: iterate the patched (e) or raw (h) link matrix "
                           "from a point mass on node 0")
    _add_common(sub.add_parser("qrank", help="quantum rank series"))
    sweep = sub.add_parser("sweep", help="damping-stability fidelity sweep")
    _add_common(sweep)
    sweep.add_argument("--grid", required=True, help="alpha grid lo:hi:count (inclusive)")
    sweep.add_argument("--ranker", choices=("classical", "quantum"), default="classical")
    attack = sub.add_parser("attack", help="hub-removal sensitivity report")
    _add_common(attack)
    attack.add_argument("--remove", type=int, required=True, help="number of top hubs to remove")
    attack.add_argument("--ranker", choices=("classical", "quantum"), default="classical")
    analyze = sub.add_parser("analyze", help="localization / scaling / degeneracy summary")
    _add_common(analyze)
    analyze.add_argument("--ranker", choices=("classical", "quantum", "both"), default="both")
    analyze.add_argument("--delta", type=float, default=1e-4,
                         help="relative spacing separating degeneracy classes")
    _add_common(sub.add_parser("compare", help="classical vs quantum side by side"))
    return parser


def load_graph(args) -> tuple[DirectedGraph, dict]:
    """Resolve the single graph source and build its provenance record."""
    chosen = [name for name in ("input", "gen", "benchmark") if getattr(args, name, None)]
    if len(chosen) != 1:
        raise UsageError("exactly one of --input, --gen, --benchmark is required")
    source = chosen[0]
    if source == "input":
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
        if text.lstrip().lower().startswith("*vertices"):
            g = parse_pajek(text)
        else:
            g = parse_edge_list(text)
        meta = {"source": args.input}
    elif source == "benchmark":
        g = benchmark_graph(args.benchmark)
        meta = {"source": f"benchmark:{args.benchmark.lower()}"}
    else:
        try:
            family, _, size_s = args.gen.partition(":")
            model = _GEN_ALIASES[family.strip().lower()]
            size = int(size_s)
        except (KeyError, ValueError):
            raise UsageError(f"bad generator spec {args.gen!r}, expected family:size") from None
        g = generate(GeneratorParams(model, size, seed=args.seed))
        meta = {"source": f"{model}:{size}", "seed": args.seed}
    meta["graph"] = graph_digest(g)
    return g, meta


def _labels(g: DirectedGraph) -> list[str]:
    return list(g.labels) if g.labels is not None else [""] * g.node_count


def parse_grid(spec: str) -> list[float]:
    """Inclusive alpha grid from a lo:hi:count spec."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"bad grid {spec!r}, expected lo:hi:count")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad grid {spec!r}, expected lo:hi:count") from None
    if count < 1:
        raise UsageError("grid count must be at least 1")
    return [float(a) for a in np.linspace(lo, hi, count)]


def _cmd_gen(g, meta, args) -> str:
    if args.format == "json":
        return formats.dump_json({
            "provenance": meta,
            "node_count": g.node_count,
            "arcs": [list(a) for a in g.sorted_arcs()],
            "labels": None if g.labels is None else list(g.labels),
        })
    return to_edge_list(g)


def _cmd_rank(g, meta, args) -> str:
    meta = dict(meta)
    if args.bare:
        matrix = hyperlink_matrix(g)
        if args.bare == "e":
            matrix = patch_dangling(matrix)
        i0 = np.zeros(g.node_count)
        i0[0] = 1.0
        result = power_method(matrix, i0, tol=args.tol)
        values = result.values
        meta.update(bare=args.bare, converged=result.converged,
                    degenerate=result.degenerate, iterations=result.iterations)
        extra = {"bare": args.bare, "converged": result.converged,
                 "degenerate": result.degenerate, "iterations": result.iterations}
    else:
        values = classical_pagerank(g, args.alpha, tol=args.tol)
        meta["alpha"] = args.alpha
        extra = {"alpha": args.alpha}
    if args.format == "json":
        return formats.dump_json({
            "provenance": {k: v for k, v in meta.items() if k in ("source", "seed", "graph")},
            **extra,
            "values": [float(x) for x in values],
            "ranking": [int(i) for i in formats.ranking_order(values)],
        })
    return formats.write_rank_csv(values, _labels(g), meta)


def _cmd_qrank(g, meta, args) -> str:
    meta = dict(meta, alpha=args.alpha, steps=args.steps)
    series = quantum_rank_series(g, args.alpha, args.steps, args.backend)
    if args.format == "json":
        return formats.dump_json(formats.series_json(series, meta))
    return formats.write_series_csv(series, meta)


def _cmd_sweep(g, meta, args) -> str:
    grid = parse_grid(args.grid)
    meta = dict(meta, ranker=args.ranker, steps=args.steps)
    sweep = analysis.damping_sweep(g, grid, args.ranker, args.steps, args.backend)
    if args.format == "json":
        return formats.dump_json(formats.sweep_json(sweep, meta))
    return formats.write_sweep_csv(sweep, meta)


def _cmd_attack(g, meta, args) -> str:
    meta = dict(meta, ranker=args.ranker, alpha=args.alpha, steps=args.steps)
    report = analysis.attack_sensitivity(g, args.remove, args.ranker, args.alpha,
                                         args.steps, args.backend)
    if args.format == "json":
        return formats.dump_json(formats.attack_json(report, meta))
    return formats.write_attack_csv(report, meta)


def _cmd_analyze(g, meta, args) -> str:
    rankers = ("classical", "quantum") if args.ranker == "both" else (args.ranker,)
    meta = dict(meta, alpha=args.alpha, steps=args.steps, delta=args.delta)
    rows = []
    for ranker in rankers:
        values = analysis.rank_vector(g, ranker, args.alpha, args.steps, args.backend)
        fit = analysis.power_law_fit(values)
        profile = analysis.degeneracy_profile(values, args.delta)
        rows.append({
            "ranker": ranker,
            "ipr": analysis.ipr(values),
            "power_law_exponent": fit.exponent,
            "power_law_intercept": fit.intercept,
            "power_law_r2": fit.r_squared,
            "degeneracy_classes": profile.class_count,
            "spread": float(values.max() - values.min()),
        })
    if args.format == "json":
        return formats.dump_json({"provenance": meta, "rows": rows})
    lines = [f"# {k}={v}" for k, v in meta.items()]
    lines.append("ranker,ipr,power_law_exponent,power_law_intercept,power_law_r2,"
                 "degeneracy_classes,spread")
    for row in rows:
        lines.append(",".join([
            row["ranker"], formats.fmt(row["ipr"]), formats.fmt(row["power_law_exponent"]),
            formats.fmt(row["power_law_intercept"]), formats.fmt(row["power_law_r2"]),
            str(row["degeneracy_classes"]), formats.fmt(row["spread"]),
        ]))
    return "\n".join(lines) + "\n"


def _cmd_compare(g, meta, args) -> str:
    meta = dict(meta, alpha=args.alpha, steps=args.steps)
    classical = classical_pagerank(g, args.alpha, tol=args.tol)
    quantum = quantum_pagerank(g, args.alpha, args.steps, args.backend)
    if args.format == "json":
        return formats.dump_json(formats.compare_json(_labels(g), classical, quantum, meta))
    return formats.write_compare_csv(_labels(g), classical, quantum, meta)


_COMMANDS = {
    "gen": _cmd_gen,
    "rank": _cmd_rank,
    "qrank": _cmd_qrank,
    "sweep": _cmd_sweep,
    "attack": _cmd_attack,
    "analyze": _cmd_analyze,
    "compare": _cmd_compare,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"qprank: {exc}", file=sys.stderr)
        return 4
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    try:
        graph, meta = load_graph(args)
        text = _COMMANDS[args.command](graph, meta, args)
    except OSError as exc:
        print(f"qprank: cannot read input: {exc.filename or exc}", file=sys.stderr)
        return 2
    except GraphFormatError as exc:
        print(f"qprank: parse error: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ValueError) as exc:
        print(f"qprank: {exc}", file=sys.stderr)
        return 4

    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
