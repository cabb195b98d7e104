"""Command-line interface: ``surprise-exact <command> ...``.

Exit codes: 0 success, 2 input error, 3 guard or time limit exceeded,
4 internal invariant failure.  Errors are reported as JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from pathlib import Path

from . import corpus
from .graph import Graph, GraphFormatError, parse_graph, parse_partition, write_partition
from .minip import EdgeMode, MinIPProblem, Objective, TieMode
from .oracle import OracleLimitError, brute_force_surprise_optimum
from .surprise import evaluate
from .sweep import (
    SCHEMA,
    SweepConfig,
    SweepReport,
    Variant,
    legal_configs,
    optimize,
    properties_csv,
    grid_csv,
)

EXIT_OK, EXIT_INPUT, EXIT_LIMIT, EXIT_INTERNAL = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str, kind: str = "InputError", line: int | None = None):
        super().__init__(message)
        self.code, self.kind, self.line = code, kind, line


def read_graph(path: str, fmt: str = "edgelist", one_based: bool = False) -> Graph:
    """Load from ``path``; a missing path that names a bundled graph loads that."""
    p = Path(path)
    if not p.exists():
        if path in corpus.BUNDLED or path == "grid6":
            return corpus.load(path)
        raise CliError(EXIT_INPUT, f"no such file: {path}")
    with p.open() as fh:
        return parse_graph(fh, format=fmt, one_based=one_based)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _config(args) -> SweepConfig:
    try:
        return SweepConfig(
            Variant(args.variant),
            use_psk=args.psk,
            use_tf=args.tf,
            use_emi=args.emi,
            backend=args.backend,
            time_limit=args.time_limit,
            threads=args.threads or os.cpu_count(),
        )
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None


def _finish_report(args, g: Graph, rep: SweepReport) -> int:
    _emit(_dump(rep.to_json(timings=args.timings)), args.output)
    if args.partition_out:
        Path(args.partition_out).write_text(write_partition(g, rep.best))
    return EXIT_LIMIT if rep.status == "Bounded" else EXIT_OK


def cmd_eval(args) -> int:
    g = read_graph(args.graph, args.format, args.one_based)
    with open(args.partition) as fh:
        z = parse_partition(g, fh)
    s = evaluate(g, z, digits=args.digits)
    out = {
        "schema": SCHEMA,
        "n": g.n,
        "m": g.m,
        "i_e": z.i_e,
        "i_p": z.i_p,
        "num_clusters": z.num_clusters,
        "surprise": s.to_json(exact=True),
    }
    _emit(_dump(out), args.output)
    return EXIT_OK


def cmd_optimize(args) -> int:
    g = read_graph(args.graph, args.format, args.one_based)
    return _finish_report(args, g, optimize(g, _config(args)))


def cmd_tree(args) -> int:
    from .treedp import NotAForestError, surprise_optimal_forest

    g = read_graph(args.graph, args.format, args.one_based)
    t0 = time.perf_counter()
    try:
        z, s = surprise_optimal_forest(g, digits=args.digits)
    except NotAForestError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    rep = SweepReport(g, None, z, s, method="treedp", k_start=0, wall_time=time.perf_counter() - t0)
    return _finish_report(args, g, rep)


def cmd_oracle(args) -> int:
    g = read_graph(args.graph, args.format, args.one_based)
    t0 = time.perf_counter()
    z, s = brute_force_surprise_optimum(g)
    rep = SweepReport(g, None, z, s, method="oracle", k_start=0, wall_time=time.perf_counter() - t0)
    return _finish_report(args, g, rep)


def cmd_export_lp(args) -> int:
    from .lpformat import export_clique_partition_lp, export_lp

    g = read_graph(args.graph, args.format, args.one_based)
    if args.clique_partition:
        _emit(export_clique_partition_lp(g), args.output)
        return EXIT_OK
    if args.k is None:
        raise CliError(EXIT_INPUT, "export-lp needs --k (or --clique-partition)")
    try:
        prob = MinIPProblem(
            g,
            args.k,
            EdgeMode(args.mode),
            Objective(args.objective),
            TieMode.MAX_EDGES if args.emi else TieMode.NONE,
            args.cap,
        )
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    _emit(export_lp(prob), args.output)
    return EXIT_OK


def _bench_graphs(listing: str, seed: int, fmt: str, one_based: bool) -> list[tuple[str, Graph]]:
    """Entries: a file path, a bundled name, or ``random:N:P`` drawn from ``seed``."""
    rng = random.Random(seed)
    base = Path(listing).parent
    out = []
    with open(listing) as fh:
        for raw in fh:
            entry = raw.split("#", 1)[0].strip()
            if not entry:
                continue
            if entry.startswith("random:"):
                try:
                    _, n, prob = entry.split(":")
                    g = corpus.random_graph(int(n), float(prob), rng)
                except ValueError:
                    raise CliError(EXIT_INPUT, f"bad random entry {entry!r}; want random:N:P") from None
                out.append((entry, g))
                continue
            path = entry if Path(entry).is_absolute() or not (base / entry).exists() else str(base / entry)
            out.append((entry, read_graph(path, fmt, one_based)))
    return out


def cmd_bench(args) -> int:
    graphs = _bench_graphs(args.graphs, args.seed, args.format, args.one_based)
    cfgs = legal_configs(backend=args.backend, time_limit=args.time_limit,
                         threads=args.threads or os.cpu_count())
    if args.variant:
        cfgs = [c for c in cfgs if c.variant.value == args.variant]
    rows, best_rows = [], []
    bounded = False
    for name, g in graphs:
        reports = []
        for c in cfgs:
            rep = optimize(g, c)
            bounded |= rep.status == "Bounded"
            rows.append((name, rep))
            reports.append(rep)
        done = [r for r in reports if r.status == "Optimal"] or reports
        best_rows.append((name, min(done, key=lambda r: r.surprise)))
    _emit(grid_csv(rows), args.output)
    if args.properties_out:
        Path(args.properties_out).write_text(properties_csv(best_rows))
    return EXIT_LIMIT if bounded else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="surprise-exact", description="Exact surprise evaluation and optimisation.")
    sub = ap.add_subparsers(dest="command", required=True)

    def graph_args(p, positional=True):
        if positional:
            p.add_argument("graph", help="edge-list or METIS file, or a bundled name (karate, lesmis, grid6)")
        p.add_argument("--format", choices=("edgelist", "metis"), default="edgelist")
        p.add_argument("--one-based", action="store_true", help="edge-list ids start at 1")
        p.add_argument("--output", "-o", help="write the primary output here instead of stdout")
        p.add_argument("--digits", type=int, default=15, help="significant digits of -log10 S")

    def solver_args(p):
        p.add_argument("--backend", choices=("auto", "bnb", "highs"), default="auto")
        p.add_argument("--time-limit", type=float, default=None, help="seconds; stops with status Bounded")
        p.add_argument("--threads", type=int, default=None)

    def report_args(p):
        p.add_argument("--partition-out", help="also write the clustering as 'label cluster' lines")
        p.add_argument("--timings", action="store_true", help="include wall times (output no longer byte-stable)")

    p = sub.add_parser("eval", help="surprise of a given partition")
    graph_args(p)
    p.add_argument("partition", help="file of 'vertexLabel clusterId' lines")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("optimize", help="surprise-optimal clustering by the k sweep")
    graph_args(p)
    solver_args(p)
    report_args(p)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="gap")
    p.add_argument("--psk", action="store_true", help="start k at the largest clique partition")
    p.add_argument("--tf", action="store_true", help="cap each subproblem by the incumbent")
    p.add_argument("--emi", action="store_true", help="break ties towards more intracluster edges")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("tree", help="optimal clustering of a forest by dynamic programming")
    graph_args(p)
    report_args(p)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("oracle", help="optimum by enumerating every partition (n <= 14)")
    graph_args(p)
    report_args(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("export-lp", help="write a minIP model in CPLEX LP format")
    graph_args(p)
    p.add_argument("--k", type=int)
    p.add_argument("--mode", choices=[e.value for e in EdgeMode], default="exactly")
    p.add_argument("--objective", choices=[o.value for o in Objective], default="pairs")
    p.add_argument("--emi", action="store_true")
    p.add_argument("--cap", type=int, default=None, help="upper bound on the objective")
    p.add_argument("--clique-partition", action="store_true", help="export the largest clique partition model")
    p.set_defaults(func=cmd_export_lp)

    p = sub.add_parser("bench", help="variant x heuristic grid as CSV")
    p.add_argument("graphs", help="file listing graphs: paths, bundled names or random:N:P")
    graph_args(p, positional=False)
    solver_args(p)
    p.add_argument("--variant", choices=[v.value for v in Variant], default=None, help="restrict to one variant")
    p.add_argument("--seed", type=int, default=0, help="seed for random:N:P entries")
    p.add_argument("--properties-out", help="per-graph optimum table (i_e, i_p, S, S', clusters)")
    p.set_defaults(func=cmd_bench)
    return ap


def _error(code: int, kind: str, message: str, line: int | None = None) -> int:
    err = {"code": code, "type": kind, "message": message}
    if line is not None:
        err["line"] = line
    sys.stderr.write(json.dumps({"schema": SCHEMA, "error": err}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        return _error(exc.code, exc.kind, str(exc), exc.line)
    except GraphFormatError as exc:
        return _error(EXIT_INPUT, "GraphFormatError", str(exc), exc.line)
    except OracleLimitError as exc:
        return _error(EXIT_LIMIT, "OracleLimitError", str(exc))
    except (OSError, ValueError) as exc:
        return _error(EXIT_INPUT, type(exc).__name__, str(exc))
    except (AssertionError, RuntimeError) as exc:
        return _error(EXIT_INTERNAL, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
