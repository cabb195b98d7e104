"""CPLEX-LP export of the minIP integer program, and a HiGHS bridge that solves it.

One binary ``x_u_v`` (``u < v``) per vertex pair, 1 iff u and v share a
cluster.  Transitivity is only imposed through a minimum u-v vertex
separator, which keeps the model at O(nm) rows.
"""

from __future__ import annotations

import os
import tempfile
import time
from functools import lru_cache

from .graph import Clustering, Graph, connected_components, min_vertex_separator
from .minip import (
    EdgeMode,
    MinIPProblem,
    MinIPSolution,
    Objective,
    SearchTimeout,
    Status,
    TieMode,
)

_TERMS_PER_LINE = 8


def var(u: int, v: int) -> str:
    return f"x_{u}_{v}" if u < v else f"x_{v}_{u}"


@lru_cache(maxsize=16)
def separator_rows(g: Graph) -> tuple[tuple[int, int, int], ...]:
    """Triples ``(u, v, w)`` with ``w`` in Sep(u, v), for every ordered pair ``u != v``.

    Both orientations are listed; for a pair whose separator is unique the
    second orientation repeats the first row.
    """
    rows = []
    for u in range(g.n):
        for v in range(g.n):
            if u != v:
                rows.extend((u, v, w) for w in min_vertex_separator(g, u, v))
    return tuple(rows)


def _linear(terms: list[tuple[int, str]]) -> list[str]:
    """Render ``coef name`` terms, wrapped over several lines."""
    if not terms:
        return ["0"]
    parts = []
    for i, (c, name) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c)} "
        if i == 0:
            parts.append(f"{'-' if c < 0 else ''}{mag}{name}")
        else:
            parts.append(f"{sign} {mag}{name}")
    lines = []
    for i in range(0, len(parts), _TERMS_PER_LINE):
        lines.append(" ".join(parts[i:i + _TERMS_PER_LINE]))
    return lines


def _objective_terms(prob: MinIPProblem) -> list[tuple[int, str]]:
    g = prob.graph
    # weight > max edge count, so the primary objective always dominates
    w = g.m + 1
    emi = prob.tie_mode is TieMode.MAX_EDGES
    terms = []
    for u in range(g.n):
        for v in range(u + 1, g.n):
            edge = g.has_edge(u, v)
            if prob.objective is Objective.PAIRS:
                # w * sum(pairs) - sum(edges) ranks equal-pair solutions by edges
                c = (w - 1 if edge else w) if emi else 1
            else:
                # w * (pairs - edges) - edges, or plain pairs - edges
                c = (-1 if edge else w) if emi else (0 if edge else 1)
            if c:
                terms.append((c, var(u, v)))
    return terms


def _primary_terms(prob: MinIPProblem) -> list[tuple[int, str]]:
    g = prob.graph
    out = []
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if prob.objective is Objective.PAIRS or not g.has_edge(u, v):
                out.append((1, var(u, v)))
    return out


def _block(name: str, lines: list[str], tail: str) -> list[str]:
    out = [f" {name}: {lines[0]}"]
    out.extend(f"   {ln}" for ln in lines[1:])
    out[-1] += f" {tail}"
    return out


def export_lp(prob: MinIPProblem) -> str:
    """The minIP integer program for ``prob`` as CPLEX LP text.

    Contains the separator transitivity rows, the edge-count row (``=`` or
    ``>=`` per ``edge_mode``), an optional ``cap`` row bounding the primary
    objective, and the objective.  With ``tie_mode`` MAX_EDGES the objective is
    the weighted single-objective form ``(m + 1) * primary - edges``.
    """
    g = prob.graph
    out = [
        f"\\ minIP n={g.n} m={g.m} k={prob.k} edge_mode={prob.edge_mode.value} "
        f"objective={prob.objective.value} tie_mode={prob.tie_mode.value}",
        "Minimize",
    ]
    out += _block("obj", _linear(_objective_terms(prob)), "")
    out.append("Subject To")
    for u, v, w in separator_rows(g):
        out.append(f" t_{u}_{v}_{w}: {var(u, w)} + {var(w, v)} - {var(u, v)} <= 1")
    sense = "=" if prob.edge_mode is EdgeMode.EXACTLY else ">="
    out += _block("edges", _linear([(1, var(u, v)) for u, v in g.edges]), f"{sense} {prob.k}")
    if prob.ip_cap is not None:
        out += _block("cap", _linear(_primary_terms(prob)), f"<= {prob.ip_cap}")
    out.append("Binary")
    names = [var(u, v) for u in range(g.n) for v in range(u + 1, g.n)]
    for i in range(0, len(names), _TERMS_PER_LINE):
        out.append(" " + " ".join(names[i:i + _TERMS_PER_LINE]))
    out.append("End")
    return "\n".join(out) + "\n"


def export_clique_partition_lp(g: Graph) -> str:
    """Model for the largest clique partition: maximise clustered edges, non-edges fixed to 0."""
    out = [f"\\ clique partition n={g.n} m={g.m}", "Maximize"]
    out += _block("obj", _linear([(1, var(u, v)) for u, v in g.edges]), "")
    out.append("Subject To")
    for u, v, w in separator_rows(g):
        out.append(f" t_{u}_{v}_{w}: {var(u, w)} + {var(w, v)} - {var(u, v)} <= 1")
    out.append("Bounds")
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if not g.has_edge(u, v):
                out.append(f" {var(u, v)} = 0")
    out.append("Binary")
    names = [var(u, v) for u in range(g.n) for v in range(u + 1, g.n)]
    for i in range(0, len(names), _TERMS_PER_LINE):
        out.append(" " + " ".join(names[i:i + _TERMS_PER_LINE]))
    out.append("End")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# HiGHS bridge


def _run_highs(text: str, deadline: float | None, threads: int | None):
    import highspy

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 0.0)
    if threads:
        h.setOptionValue("threads", int(threads))
    if deadline is not None:
        left = deadline - time.monotonic()
        if left <= 0:
            raise SearchTimeout()
        h.setOptionValue("time_limit", float(left))
    fd, path = tempfile.mkstemp(suffix=".lp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        if h.readModel(path) != highspy.HighsStatus.kOk:
            raise RuntimeError("HiGHS rejected the exported model")
    finally:
        os.unlink(path)
    h.run()
    status = h.getModelStatus()
    if status == highspy.HighsModelStatus.kTimeLimit:
        raise SearchTimeout()
    if status == highspy.HighsModelStatus.kInfeasible:
        return None, int(h.getInfo().mip_node_count)
    if status != highspy.HighsModelStatus.kOptimal:
        raise RuntimeError(f"HiGHS ended with {h.modelStatusToString(status)}")
    names = h.getLp().col_names_
    values = h.getSolution().col_value
    ones = {name for name, x in zip(names, values) if x > 0.5}
    return ones, int(h.getInfo().mip_node_count)


def _clustering_from_pairs(g: Graph, ones: set[str]) -> Clustering:
    # components of the x = 1 pair graph; an optimal point is already transitive
    pair_graph = Graph.from_edges(
        g.n, [(int(a), int(b)) for a, b in (name[2:].split("_") for name in ones)]
    )
    comps = connected_components(pair_graph)
    z = Clustering.from_clusters(g, comps)
    if z.i_p != len(ones):
        raise RuntimeError("solver returned a non-transitive pair assignment")
    return z


def solve_highs(prob: MinIPProblem, deadline: float | None = None,
                threads: int | None = None) -> MinIPSolution:
    """Solve ``prob`` by handing :func:`export_lp` text to HiGHS."""
    g = prob.graph
    if g.n < 2:
        z = Clustering.singletons(g)
        return MinIPSolution(Status.OPTIMAL, prob.k, z, 0, 0)
    ones, nodes = _run_highs(export_lp(prob), deadline, threads)
    if ones is None:
        if prob.ip_cap is None:
            return MinIPSolution(Status.INFEASIBLE, prob.k, nodes_explored=nodes)
        if prob.edge_mode is EdgeMode.AT_LEAST:
            return MinIPSolution(Status.CAP_EXCEEDED, prob.k, nodes_explored=nodes)
        uncapped = MinIPProblem(g, prob.k, prob.edge_mode, prob.objective, prob.tie_mode)
        probe, more = _run_highs(export_lp(uncapped), deadline, threads)
        status = Status.INFEASIBLE if probe is None else Status.CAP_EXCEEDED
        return MinIPSolution(status, prob.k, nodes_explored=nodes + more)
    z = _clustering_from_pairs(g, ones)
    obj = z.i_p - z.i_e if prob.objective is Objective.GAP else z.i_p
    return MinIPSolution(Status.OPTIMAL, prob.k, z, obj, nodes)


def solve_clique_partition_highs(g: Graph, deadline: float | None = None) -> Clustering:
    if g.m == 0:
        return Clustering.singletons(g)
    ones, _ = _run_highs(export_clique_partition_lp(g), deadline, None)
    return _clustering_from_pairs(g, ones)
