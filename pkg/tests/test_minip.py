import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete, graphs, path
from surprise_exact.corpus import load
from surprise_exact.graph import Graph
from surprise_exact.minip import (
    EdgeMode,
    MinIPProblem,
    Objective,
    SearchTimeout,
    Status,
    TieMode,
    max_clique_partition_edges,
    search_order,
    solve,
)
from surprise_exact.oracle import first_occurrences


def expected(table, k, mode, objective, emi):
    """(objective value, i_e, rank, assignment) of the canonical optimum, or None."""
    cands = []
    for (ie, ip), (rank, a) in table.items():
        if (ie == k) if mode is EdgeMode.EXACTLY else (ie >= k):
            obj = ip - ie if objective is Objective.GAP else ip
            cands.append((obj, -ie if emi else 0, rank, a, ie))
    if not cands:
        return None
    return min(cands)


def in_search_order(g: Graph) -> Graph:
    """Relabel so that the solver's branching order is 0, 1, ..., n-1."""
    pos = {v: t for t, v in enumerate(search_order(g))}
    return g.relabel([pos[v] for v in range(g.n)])


MODES = [
    (EdgeMode.EXACTLY, Objective.PAIRS),
    (EdgeMode.AT_LEAST, Objective.PAIRS),
    (EdgeMode.AT_LEAST, Objective.GAP),
]


class TestAgainstOracle:
    @settings(max_examples=60, deadline=None)
    @given(graphs(min_n=1, max_n=7), st.booleans())
    def test_all_k_all_modes(self, g, emi):
        g = in_search_order(g)
        assert search_order(g) == list(range(g.n))
        table = first_occurrences(g)
        tie = TieMode.MAX_EDGES if emi else TieMode.NONE
        for mode, obj in MODES:
            for k in range(g.m + 1):
                sol = solve(MinIPProblem(g, k, mode, obj, tie))
                exp = expected(table, k, mode, obj, emi)
                if exp is None:
                    assert sol.status is Status.INFEASIBLE
                    continue
                assert sol.status is Status.OPTIMAL
                assert sol.objective_value == exp[0]
                # canonical optimum: first in restricted-growth order (after
                # maximising i_e under EMI)
                assert sol.clustering.assignment == exp[3]

    @settings(max_examples=40, deadline=None)
    @given(graphs(min_n=2, max_n=7), st.data())
    def test_caps(self, g, data):
        table = first_occurrences(g)
        mode, obj = data.draw(st.sampled_from(MODES))
        k = data.draw(st.integers(0, g.m))
        exp = expected(table, k, mode, obj, False)
        if exp is None:
            sol = solve(MinIPProblem(g, k, mode, obj, ip_cap=0))
            assert sol.status is Status.INFEASIBLE
            return
        opt = exp[0]
        assert solve(MinIPProblem(g, k, mode, obj, ip_cap=opt)).objective_value == opt
        assert solve(MinIPProblem(g, k, mode, obj, ip_cap=opt + 3)).objective_value == opt
        if opt > 0:
            below = solve(MinIPProblem(g, k, mode, obj, ip_cap=opt - 1))
            assert below.status is Status.CAP_EXCEEDED and below.clustering is None


class TestExamples:
    def test_triangle_exactly_two_infeasible(self):
        assert solve(MinIPProblem(complete(3), 2)).status is Status.INFEASIBLE

    def test_p3(self):
        sol = solve(MinIPProblem(path(3), 1))
        assert (sol.i_e, sol.i_p) == (1, 1)

    def test_k_zero_is_singletons(self):
        sol = solve(MinIPProblem(load("karate"), 0))
        assert sol.i_p == 0 and sol.clustering.num_clusters == 34

    def test_gap_with_emi_prefers_more_edges(self):
        # on a 4-path the middle vertices branch first and are grouped first;
        # both matchings of size 1 and 2 have gap 0
        g = path(4)
        plain = solve(MinIPProblem(g, 1, EdgeMode.AT_LEAST, Objective.GAP))
        emi = solve(MinIPProblem(g, 1, EdgeMode.AT_LEAST, Objective.GAP, TieMode.MAX_EDGES))
        assert plain.objective_value == emi.objective_value == 0
        assert plain.i_e == 1 and emi.i_e == 2

    def test_solution_json(self):
        g = path(3)
        d = solve(MinIPProblem(g, 1)).to_json(g)
        assert d["status"] == "Optimal" and d["i_p"] == 1
        assert d["clusters"] == [["0", "1"], ["2"]] or d["clusters"] == [["1", "2"], ["0"]]

    def test_validation(self):
        g = path(3)
        with pytest.raises(ValueError):
            MinIPProblem(g, 3)
        with pytest.raises(ValueError):
            MinIPProblem(g, 1, EdgeMode.EXACTLY, Objective.GAP)
        with pytest.raises(ValueError):
            MinIPProblem(g, 1, ip_cap=-1)
        with pytest.raises(ValueError):
            solve(MinIPProblem(g, 1), backend="cplex")

    def test_deadline(self):
        with pytest.raises(SearchTimeout):
            max_clique_partition_edges(load("karate"), deadline=time.monotonic())
        with pytest.raises(SearchTimeout):
            solve(MinIPProblem(load("karate"), 29, EdgeMode.AT_LEAST), deadline=time.monotonic())


class TestCliquePartition:
    @settings(max_examples=60, deadline=None)
    @given(graphs(min_n=1, max_n=8))
    def test_against_oracle(self, g):
        table = first_occurrences(g)
        best = max(ie for ie, ip in table if ie == ip)
        z, k = max_clique_partition_edges(g)
        assert k == best == z.i_e == z.i_p
        for c in z.clusters():
            assert all(g.has_edge(u, v) for i, u in enumerate(c) for v in c[i + 1:])
