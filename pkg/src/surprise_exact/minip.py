"""Exact solver for minIP: fewest intracluster pairs at a given intracluster edge count.

The search assigns vertices, in a fixed descending-degree order, to an
existing cluster or to a new one (restricted-growth strings), so every
partition is generated once.  Children are visited in restricted-growth
order, which makes depth-first order lexicographic: the first optimum met is
the canonical one and ties never need to be re-explored.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum

from .graph import Clustering, Graph


class EdgeMode(str, Enum):
    EXACTLY = "exactly"
    AT_LEAST = "at_least"


class Objective(str, Enum):
    PAIRS = "pairs"
    GAP = "gap"


class TieMode(str, Enum):
    NONE = "none"
    MAX_EDGES = "max_edges"


class Status(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    CAP_EXCEEDED = "CapExceeded"


class SearchTimeout(Exception):
    """Raised when a search passes its deadline."""


@dataclass(frozen=True)
class MinIPProblem:
    """One subproblem of the sweep.

    ``ip_cap`` bounds the objective value (pairs, or pairs minus edges for the
    gap objective); solutions above it are reported as ``CapExceeded``.
    """

    graph: Graph
    k: int
    edge_mode: EdgeMode = EdgeMode.EXACTLY
    objective: Objective = Objective.PAIRS
    tie_mode: TieMode = TieMode.NONE
    ip_cap: int | None = None

    def __post_init__(self):
        if not 0 <= self.k <= self.graph.m:
            raise ValueError(f"k = {self.k} outside 0..{self.graph.m}")
        if self.objective is Objective.GAP and self.edge_mode is not EdgeMode.AT_LEAST:
            raise ValueError("the gap objective requires edge_mode AT_LEAST")
        if self.ip_cap is not None and self.ip_cap < 0:
            raise ValueError("ip_cap must be nonnegative")


@dataclass(frozen=True)
class MinIPSolution:
    status: Status
    k: int
    clustering: Clustering | None = None
    objective_value: int | None = None
    nodes_explored: int = 0

    @property
    def i_e(self) -> int | None:
        return None if self.clustering is None else self.clustering.i_e

    @property
    def i_p(self) -> int | None:
        return None if self.clustering is None else self.clustering.i_p

    def to_json(self, g: Graph) -> dict:
        clusters = None
        if self.clustering is not None:
            clusters = [[g.labels[v] for v in c] for c in self.clustering.clusters()]
        return {
            "status": self.status.value,
            "k": self.k,
            "objective": self.objective_value,
            "i_e": self.i_e,
            "i_p": self.i_p,
            "clusters": clusters,
            "nodes_explored": self.nodes_explored,
        }


def search_order(g: Graph) -> list[int]:
    """Fixed branching order: descending degree, then vertex id."""
    return sorted(range(g.n), key=lambda v: (-g.degree(v), v))


class _Found(Exception):
    pass


class _Search:
    """Depth-first restricted-growth search shared by minIP and clique partitioning."""

    def __init__(self, g: Graph, deadline: float | None = None):
        self.g = g
        self.order = search_order(g)
        pos = {v: t for t, v in enumerate(self.order)}
        n = g.n
        self.adj = []
        for v in self.order:
            mask = 0
            for w in g.adjacency[v]:
                mask |= 1 << pos[w]
            self.adj.append(mask)
        self.later = [((1 << n) - 1) ^ ((1 << t) - 1) for t in range(n + 1)]
        # rem[t]: edges with an endpoint at position >= t, i.e. edges still undecided
        back = [(self.adj[t] & ((1 << t) - 1)).bit_count() for t in range(n)]
        self.rem = [0] * (n + 1)
        for t in range(n - 1, -1, -1):
            self.rem[t] = self.rem[t + 1] + back[t]
        self.deadline = deadline
        self.nodes = 0
        self.masks: list[int] = []
        self.nbrs: list[int] = []
        self.sizes: list[int] = []
        self.assign = [0] * n
        self.best_assign: list[int] | None = None

    def _tick(self):
        self.nodes += 1
        if self.deadline is not None and not self.nodes & 1023 and time.monotonic() > self.deadline:
            raise SearchTimeout()

    def clustering(self) -> Clustering:
        labels = [0] * self.g.n
        for t, c in enumerate(self.best_assign):
            labels[self.order[t]] = c
        return Clustering.from_assignment(self.g, labels)

    # -- minIP ---------------------------------------------------------------

    def min_ip(self, k: int, exactly: bool, gap: bool, max_edges: bool, cap: int | None,
               first_feasible: bool = False) -> None:
        self.k, self.exactly, self.gap, self.max_edges = k, exactly, gap, max_edges
        self.cap = cap
        self.first_feasible = first_feasible
        self.best_obj: int | None = None
        self.best_ie = -1
        try:
            self._visit(0, 0, 0)
        except _Found:
            pass

    def _visit(self, t: int, ie: int, ip: int) -> None:
        self._tick()
        k = self.k
        if ie + self.rem[t] < k:
            return
        need = k - ie if k > ie else 0
        lb = ip - ie if self.gap else ip + need
        cap = self.cap
        if cap is not None and lb > cap:
            return
        best = self.best_obj
        if best is not None and (lb > best or (lb == best and (not self.max_edges or ie + self.rem[t] <= self.best_ie))):
            return
        n = self.g.n
        if t == n:
            # ie >= k and ie <= k (exactly) already enforced
            self.best_obj, self.best_ie = lb, ie
            self.best_assign = list(self.assign)
            if self.first_feasible:
                raise _Found()
            return
        a = self.adj[t]
        bit = 1 << t
        later = self.later[t + 1]
        has_later = a & later
        masks, nbrs, sizes = self.masks, self.nbrs, self.sizes
        for c in range(len(masks)):
            mk = masks[c]
            e = (a & mk).bit_count()
            # a cluster must end up connected (splitting a disconnected one keeps
            # i_e and lowers i_p); joining without an edge needs a later bridge
            if not e and not (has_later and nbrs[c] & later):
                continue
            ie2 = ie + e
            if self.exactly and ie2 > k:
                continue
            old_nb = nbrs[c]
            masks[c] = mk | bit
            nbrs[c] = old_nb | a
            sizes[c] += 1
            self.assign[t] = c
            self._visit(t + 1, ie2, ip + sizes[c] - 1)
            masks[c] = mk
            nbrs[c] = old_nb
            sizes[c] -= 1
        masks.append(bit)
        nbrs.append(a)
        sizes.append(1)
        self.assign[t] = len(masks) - 1
        self._visit(t + 1, ie, ip)
        masks.pop()
        nbrs.pop()
        sizes.pop()

    # -- clique partition ----------------------------------------------------

    def max_clique_partition(self) -> None:
        self.best_ie = -1
        self._visit_clique(0, 0)

    def _visit_clique(self, t: int, ie: int) -> None:
        self._tick()
        if ie + self.rem[t] <= self.best_ie:
            return
        n = self.g.n
        if t == n:
            self.best_ie = ie
            self.best_assign = list(self.assign)
            return
        a = self.adj[t]
        bit = 1 << t
        masks, sizes = self.masks, self.sizes
        for c in range(len(masks)):
            mk = masks[c]
            if mk & ~a:
                continue
            masks[c] = mk | bit
            sizes[c] += 1
            self.assign[t] = c
            self._visit_clique(t + 1, ie + sizes[c] - 1)
            sizes[c] -= 1
            masks[c] = mk
        masks.append(bit)
        sizes.append(1)
        self.assign[t] = len(masks) - 1
        self._visit_clique(t + 1, ie)
        masks.pop()
        sizes.pop()


def _solve_bnb(prob: MinIPProblem, deadline: float | None) -> MinIPSolution:
    g = prob.graph
    s = _Search(g, deadline)
    exactly = prob.edge_mode is EdgeMode.EXACTLY
    gap = prob.objective is Objective.GAP
    s.min_ip(prob.k, exactly, gap, prob.tie_mode is TieMode.MAX_EDGES, prob.ip_cap)
    if s.best_assign is not None:
        z = s.clustering()
        obj = z.i_p - z.i_e if gap else z.i_p
        return MinIPSolution(Status.OPTIMAL, prob.k, z, obj, s.nodes)
    if prob.ip_cap is None:
        return MinIPSolution(Status.INFEASIBLE, prob.k, nodes_explored=s.nodes)
    if not exactly:
        # one cluster per connected component has i_e = m >= k
        return MinIPSolution(Status.CAP_EXCEEDED, prob.k, nodes_explored=s.nodes)
    probe = _Search(g, deadline)
    probe.min_ip(prob.k, True, False, False, None, first_feasible=True)
    status = Status.CAP_EXCEEDED if probe.best_assign is not None else Status.INFEASIBLE
    return MinIPSolution(status, prob.k, nodes_explored=s.nodes + probe.nodes)


def solve(prob: MinIPProblem, backend: str = "bnb", deadline: float | None = None,
          threads: int | None = None) -> MinIPSolution:
    """Solve a minIP subproblem exactly.

    Parameters
    ----------
    prob : MinIPProblem
    backend : {"bnb", "highs"}
        ``"bnb"`` is the built-in branch-and-bound.  ``"highs"`` writes the
        integer program with :func:`surprise_exact.lpformat.export_lp` and
        solves the text model with HiGHS (needs ``highspy``).
    deadline : float, optional
        ``time.monotonic()`` value after which :class:`SearchTimeout` is raised.

    Among optimal partitions the one returned maximises ``i_e`` when
    ``tie_mode`` is ``MAX_EDGES``; remaining ties go to the lexicographically
    smallest restricted-growth string over :func:`search_order`.  The HiGHS
    backend returns whichever optimum the solver finds.
    """
    if backend == "bnb":
        return _solve_bnb(prob, deadline)
    if backend == "highs":
        from .lpformat import solve_highs

        return solve_highs(prob, deadline=deadline, threads=threads)
    raise ValueError(f"unknown backend {backend!r}")


def max_clique_partition_edges(g: Graph, deadline: float | None = None,
                               backend: str = "bnb") -> tuple[Clustering, int]:
    """Partition into cliques with the most intracluster edges, and that edge count."""
    if backend == "highs":
        from .lpformat import solve_clique_partition_highs

        z = solve_clique_partition_highs(g, deadline=deadline)
        return z, z.i_e
    s = _Search(g, deadline)
    s.max_clique_partition()
    z = s.clustering()
    return z, z.i_e
