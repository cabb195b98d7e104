"""Successive-k sweep: turns minIP solutions into a surprise-optimal clustering.

For each intracluster edge count k the best clustering with exactly k edges
minimises i_p, so scanning k and evaluating S(min i_p, k) finds the optimum.
The Relaxed and Gap variants solve weaker subproblems whose optimum bounds
every later k, and skip the k whose bound cannot beat the incumbent.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from enum import Enum

from .graph import Clustering, Graph
from .minip import (
    EdgeMode,
    MinIPProblem,
    Objective,
    SearchTimeout,
    Status,
    TieMode,
    max_clique_partition_edges,
    solve,
)
from .surprise import SurpriseValue, bound_gap, bound_relaxed, surprise_of

SCHEMA = "surprise-exact/1"


class Variant(str, Enum):
    EXACT = "exact"
    RELAXED = "relaxed"
    GAP = "gap"


class Action(str, Enum):
    SOLVED = "Solved"
    PRUNED_BY_BOUND = "PrunedByBound"
    PRUNED_INFEASIBLE = "PrunedInfeasible"


@dataclass(frozen=True)
class SweepConfig:
    variant: Variant = Variant.GAP
    use_psk: bool = False
    use_tf: bool = False
    use_emi: bool = False
    backend: str = "auto"
    time_limit: float | None = None
    threads: int | None = None
    # off: solve every k the variant would visit, ignoring bounds (testing aid)
    pruning: bool = True

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.use_emi and self.variant is Variant.EXACT:
            raise ValueError("EMI has no effect on the exact variant and is rejected")
        if self.backend not in ("auto", "bnb", "highs"):
            raise ValueError(f"unknown backend {self.backend!r}")

    def label(self) -> str:
        flags = [f for f, on in (("TF", self.use_tf), ("PSK", self.use_psk), ("EMI", self.use_emi)) if on]
        return "+".join([self.variant.value] + flags)


def legal_configs(**kw) -> list[SweepConfig]:
    """Every variant with every heuristic combination it admits (20 in total)."""
    out = []
    for variant in Variant:
        for tf in (False, True):
            for psk in (False, True):
                for emi in ((False,) if variant is Variant.EXACT else (False, True)):
                    out.append(SweepConfig(variant, use_psk=psk, use_tf=tf, use_emi=emi, **kw))
    return out


@dataclass
class KRecord:
    k: int
    action: Action
    bound: SurpriseValue | None = None
    cap: int | None = None
    status: Status | None = None
    objective: int | None = None
    i_e: int | None = None
    i_p: int | None = None
    surprise: SurpriseValue | None = None
    # Gap variant: S(i_e + g, i_e) of the returned solution
    solution_bound: SurpriseValue | None = None
    nodes: int = 0
    time_s: float = 0.0

    def to_json(self, timings: bool = False) -> dict:
        d = {
            "k": self.k,
            "action": self.action.value,
            "bound": None if self.bound is None else self.bound.to_json(),
            "cap": self.cap,
            "status": None if self.status is None else self.status.value,
            "objective": self.objective,
            "i_e": self.i_e,
            "i_p": self.i_p,
            "surprise": None if self.surprise is None else self.surprise.to_json(),
            "solution_bound": None if self.solution_bound is None else self.solution_bound.to_json(),
            "nodes": self.nodes,
        }
        if timings:
            d["time_s"] = round(self.time_s, 6)
        return d


@dataclass
class SweepReport:
    graph: Graph
    config: SweepConfig | None
    best: Clustering
    surprise: SurpriseValue
    status: str = "Optimal"
    method: str = "sweep"
    k_start: int = 1
    psk_edges: int | None = None
    per_k: list[KRecord] = field(default_factory=list)
    subproblems_solved: int = 0
    wall_time: float = 0.0

    @property
    def solved_count(self) -> int:
        return sum(r.action is Action.SOLVED for r in self.per_k)

    @property
    def pruned_count(self) -> int:
        return len(self.per_k) - self.solved_count

    def to_json(self, timings: bool = False) -> dict:
        g, z = self.graph, self.best
        d = {
            "schema": SCHEMA,
            "method": self.method,
            "status": self.status,
            "config": None if self.config is None else {
                "variant": self.config.variant.value,
                "psk": self.config.use_psk,
                "tf": self.config.use_tf,
                "emi": self.config.use_emi,
            },
            "n": g.n,
            "m": g.m,
            "i_e": z.i_e,
            "i_p": z.i_p,
            "num_clusters": z.num_clusters,
            "surprise": self.surprise.to_json(exact=True),
            "clusters": [[g.labels[v] for v in c] for c in z.clusters()],
            "k_start": self.k_start,
            "psk_edges": self.psk_edges,
            "solved_count": self.solved_count,
            "pruned_count": self.pruned_count,
            "subproblems_solved": self.subproblems_solved,
            "per_k": [r.to_json(timings) for r in self.per_k],
        }
        if timings:
            d["wall_time"] = round(self.wall_time, 6)
        return d


def lower_bound_ip_cap(incumbent: SurpriseValue, k: int, p: int, m: int) -> int | None:
    """Largest i_p with S(i_p, k) < incumbent, or None if even S(k, k) is not below it.

    S is nondecreasing in i_p at fixed k, so the feasible i_p form a prefix of
    [k, p - m + k] and binary search applies.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not k <= m <= p:
        raise ValueError(f"need k <= m <= p, got k={k} m={m} p={p}")
    lo, hi = k, p - m + k
    if not surprise_of(p, m, lo, k) < incumbent:
        return None
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if surprise_of(p, m, mid, k) < incumbent:
            lo = mid
        else:
            hi = mid - 1
    return lo


def resolve_backend(g: Graph, backend: str) -> str:
    if backend != "auto":
        return backend
    if g.n <= 16:
        return "bnb"
    try:
        import highspy  # noqa: F401
    except ImportError:
        return "bnb"
    return "highs"


def _trivial(g: Graph, cfg: SweepConfig | None, method: str = "trivial") -> SweepReport:
    z = Clustering.singletons(g)
    return SweepReport(g, cfg, z, surprise_of(g.p, g.m, 0, 0), method=method, k_start=0)


def optimize(g: Graph, cfg: SweepConfig | None = None) -> SweepReport:
    """Surprise-optimal clustering of ``g`` by the successive-k sweep.

    The incumbent starts at the all-singletons clustering (and the PSK clique
    partition when enabled).  Ties between clusterings of equal surprise keep
    the one found first.  With ``time_limit`` the sweep may stop early; the
    report then has status ``"Bounded"`` and carries the incumbent.
    """
    cfg = cfg or SweepConfig()
    if g.m == 0:
        return _trivial(g, cfg)
    t0 = time.perf_counter()
    deadline = None if cfg.time_limit is None else time.monotonic() + cfg.time_limit
    backend = resolve_backend(g, cfg.backend)
    p, m = g.p, g.m
    best = Clustering.singletons(g)
    best_s = surprise_of(p, m, 0, 0)
    report = SweepReport(g, cfg, best, best_s)

    def finish(status: str) -> SweepReport:
        report.best, report.surprise, report.status = best, best_s, status
        report.wall_time = time.perf_counter() - t0
        return report

    k_start = 1
    if cfg.use_psk:
        try:
            zc, k_start = max_clique_partition_edges(g, deadline=deadline, backend=backend)
        except SearchTimeout:
            return finish("Bounded")
        report.psk_edges = k_start
        k_start = max(k_start, 1)
        sc = surprise_of(p, m, zc.i_p, zc.i_e)
        if sc < best_s:
            best, best_s = zc, sc
    report.k_start = k_start

    mode = EdgeMode.EXACTLY if cfg.variant is Variant.EXACT else EdgeMode.AT_LEAST
    objective = Objective.GAP if cfg.variant is Variant.GAP else Objective.PAIRS
    tie = TieMode.MAX_EDGES if cfg.use_emi else TieMode.NONE
    # last solved objective value; bounds everything from the next k on
    last_obj: int | None = None

    for k in range(k_start, m + 1):
        rec = KRecord(k, Action.SOLVED)
        if last_obj is not None:
            if cfg.variant is Variant.RELAXED:
                rec.bound = bound_relaxed(last_obj, k, p, m)
            else:
                # i_p cannot exceed p - m + k, so clamping the gap keeps the bound valid
                rec.bound = bound_gap(min(last_obj, p - k), k, p, m)
            if cfg.pruning and rec.bound >= best_s:
                rec.action = Action.PRUNED_BY_BOUND
                report.per_k.append(rec)
                continue
        cap = None
        if cfg.use_tf:
            ip_cap = lower_bound_ip_cap(best_s, k, p, m)
            if ip_cap is None:
                rec.action = Action.PRUNED_INFEASIBLE
                report.per_k.append(rec)
                continue
            # the cap bounds the objective, so a feasible capped solve returns
            # the uncapped optimum and its bound stays valid
            cap = ip_cap - k if objective is Objective.GAP else ip_cap
            rec.cap = cap
        prob = MinIPProblem(g, k, mode, objective, tie, cap)
        ts = time.perf_counter()
        try:
            sol = solve(prob, backend=backend, deadline=deadline, threads=cfg.threads)
        except SearchTimeout:
            return finish("Bounded")
        rec.time_s = time.perf_counter() - ts
        report.subproblems_solved += 1
        rec.status, rec.nodes = sol.status, sol.nodes_explored
        if sol.status is not Status.OPTIMAL:
            rec.action = Action.PRUNED_INFEASIBLE
            report.per_k.append(rec)
            continue
        z = sol.clustering
        rec.objective, rec.i_e, rec.i_p = sol.objective_value, z.i_e, z.i_p
        rec.surprise = surprise_of(p, m, z.i_p, z.i_e)
        if objective is Objective.GAP:
            rec.solution_bound = rec.surprise
        if rec.surprise < best_s:
            best, best_s = z, rec.surprise
        if cfg.variant is not Variant.EXACT:
            last_obj = sol.objective_value
        report.per_k.append(rec)
    return finish("Optimal")


def optimize_auto(g: Graph, cfg: SweepConfig | None = None) -> SweepReport:
    """Forests go to the tree dynamic program, everything else to :func:`optimize`."""
    if g.m and g.is_forest():
        from .treedp import surprise_optimal_forest

        t0 = time.perf_counter()
        z, s = surprise_optimal_forest(g)
        rep = SweepReport(g, cfg, z, s, method="treedp", k_start=0)
        rep.wall_time = time.perf_counter() - t0
        return rep
    return optimize(g, cfg)


GRID_COLUMNS = ("graph", "variant", "TF", "PSK", "EMI", "subproblems_solved", "time_s")
PROPERTY_COLUMNS = ("graph", "n", "m", "i_e", "i_p", "S", "S_prime", "clusters")


def grid_csv(rows: list[tuple[str, SweepReport]]) -> str:
    """Per (graph, configuration) row with the subproblem count and wall time."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(GRID_COLUMNS)
    for name, rep in rows:
        c = rep.config
        w.writerow([name, c.variant.value, int(c.use_tf), int(c.use_psk), int(c.use_emi),
                    rep.subproblems_solved, f"{rep.wall_time:.3f}"])
    return buf.getvalue()


def properties_csv(rows: list[tuple[str, SweepReport]]) -> str:
    """One row per graph: counts, surprise, its -log10 and the cluster count."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PROPERTY_COLUMNS)
    for name, rep in rows:
        z = rep.best
        w.writerow([name, rep.graph.n, rep.graph.m, z.i_e, z.i_p, rep.surprise.scientific(),
                    f"{rep.surprise.neg_log10:.2f}", z.num_clusters])
    return buf.getvalue()
