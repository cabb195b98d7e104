import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete, cycle, from_nx, graphs, path
from surprise_exact.corpus import grid, load
from surprise_exact.graph import (
    Clustering,
    Graph,
    GraphFormatError,
    connected_components,
    min_vertex_separator,
    parse_graph,
    parse_partition,
    write_edgelist,
    write_metis,
    write_partition,
)


class TestGraphInvariants:
    def test_canonical_edges(self):
        g = Graph.from_edges(4, [(2, 1), (0, 3), (1, 0)])
        assert g.edges == ((0, 1), (0, 3), (1, 2))
        assert g.adjacency == ((1, 3), (0, 2), (1,), (0,))

    @given(graphs(max_n=9))
    def test_adjacency_consistent(self, g):
        assert sum(g.degree(v) for v in range(g.n)) == 2 * g.m
        assert list(g.edges) == sorted(set(g.edges))
        for u, v in g.edges:
            assert u < v and v in g.adjacency[u] and u in g.adjacency[v]

    def test_rejects_self_loop_and_duplicates(self):
        with pytest.raises(ValueError, match="self-loop"):
            Graph.from_edges(2, [(1, 1)])
        with pytest.raises(ValueError, match="duplicate"):
            Graph.from_edges(2, [(0, 1), (1, 0)])
        with pytest.raises(ValueError):
            Graph.from_edges(0, [])

    def test_forest_detection(self):
        assert path(5).is_forest()
        assert not cycle(4).is_forest()
        assert Graph.from_edges(5, [(0, 1), (2, 3)]).is_forest()


class TestClustering:
    def test_counts(self):
        g = complete(4)
        z = Clustering.from_assignment(g, ["a", "a", "b", "a"])
        assert z.assignment == (0, 0, 1, 0)
        assert (z.i_e, z.i_p, z.num_clusters) == (3, 3, 2)
        assert z.clusters() == [[0, 1, 3], [2]]

    @given(graphs(max_n=8), st.data())
    def test_count_bounds(self, g, data):
        a = data.draw(st.lists(st.integers(0, 3), min_size=g.n, max_size=g.n))
        z = Clustering.from_assignment(g, a)
        assert 0 <= z.i_e <= min(g.m, z.i_p)
        assert z.i_p <= g.p
        assert g.m - z.i_e <= g.p - z.i_p
        assert sorted(set(z.assignment)) == list(range(z.num_clusters))

    def test_from_clusters_validation(self):
        g = path(3)
        with pytest.raises(ValueError, match="two clusters"):
            Clustering.from_clusters(g, [[0, 1], [1, 2]])
        with pytest.raises(ValueError, match="not clustered"):
            Clustering.from_clusters(g, [[0, 1]])


class TestParsing:
    def test_path_edge_list(self):
        g = parse_graph("0 1\n1 2")
        assert (g.n, g.m) == (3, 2)

    def test_karate(self):
        g = load("karate")
        assert (g.n, g.m) == (34, 78)

    def test_self_loop_error(self):
        with pytest.raises(GraphFormatError, match="self-loop") as err:
            parse_graph("0 0")
        assert err.value.line == 1

    def test_duplicate_names_edge_and_line(self):
        with pytest.raises(GraphFormatError) as err:
            parse_graph("# c\n0 1\n1 2\n2 1\n")
        assert err.value.line == 4
        assert "1 2" in str(err.value)

    def test_header_and_isolated_vertices(self):
        g = parse_graph("5 2\n0 1\n1 2\n")
        assert (g.n, g.m) == (5, 2)
        assert parse_graph("4 0\n").n == 4

    def test_header_detection_does_not_eat_edges(self):
        # "3 1" could be a header but m=1 does not match two following lines
        g = parse_graph("3 1\n1 2\n0 1\n")
        assert g.m == 3 and g.n == 4

    def test_one_based_and_comments(self):
        g = parse_graph("# triangle\n1 2  # first\n2 3\n3 1\n", one_based=True)
        assert g.edges == ((0, 1), (0, 2), (1, 2))
        assert g.labels == ("1", "2", "3")
        with pytest.raises(GraphFormatError, match="below the base"):
            parse_graph("0 1\n", one_based=True)

    def test_string_labels(self):
        g = parse_graph("alice bob\nbob carol\n")
        assert g.labels == ("alice", "bob", "carol")
        assert g.edges == ((0, 1), (1, 2))

    def test_bad_field_count(self):
        with pytest.raises(GraphFormatError, match="line 2"):
            parse_graph("0 1\n1 2 3\n")

    def test_header_mismatch(self):
        with pytest.raises(GraphFormatError, match="declares m=3"):
            parse_graph("4 3\n0 1\n", header=True)
        with pytest.raises(GraphFormatError, match="exceeds declared"):
            parse_graph("2 1\n0 5\n", header=True)

    def test_metis(self):
        text = "% star\n4 3\n2 3 4\n1\n1\n1\n"
        g = parse_graph(text, format="metis")
        assert (g.n, g.m) == (4, 3)
        assert g.adjacency[0] == (1, 2, 3)

    def test_metis_isolated_vertex_line(self):
        g = parse_graph("4 2\n2\n1 3\n2\n\n", format="metis")
        assert (g.n, g.m) == (4, 2)
        assert g.degree(3) == 0

    def test_metis_errors(self):
        with pytest.raises(GraphFormatError, match="symmetrically"):
            parse_graph("2 1\n2\n\n", format="metis")
        with pytest.raises(GraphFormatError, match="weighted"):
            parse_graph("2 1 1\n2 5\n1 5\n", format="metis")
        with pytest.raises(GraphFormatError, match="declares m"):
            parse_graph("2 2\n2\n1\n", format="metis")

    def test_unknown_format(self):
        with pytest.raises(ValueError, match="unknown graph format"):
            parse_graph("0 1", format="gml")

    @settings(max_examples=60)
    @given(graphs(max_n=10))
    def test_round_trip(self, g):
        for text, fmt in ((write_edgelist(g), "edgelist"), (write_metis(g), "metis")):
            h = parse_graph(text, format=fmt)
            assert h.n == g.n and h.edges == g.edges

    def test_round_trip_without_header(self):
        g = path(4)
        assert parse_graph(write_edgelist(g, header=False)).edges == g.edges

    def test_partition_round_trip(self):
        g = parse_graph("alice bob\nbob carol\ncarol dave\n")
        z = Clustering.from_clusters(g, [[0, 1], [2, 3]])
        text = write_partition(g, z)
        assert text.splitlines()[0] == "alice 0"
        assert parse_partition(g, text) == z

    def test_partition_errors(self):
        g = path(3)
        with pytest.raises(GraphFormatError, match="without a cluster"):
            parse_partition(g, "0 a\n1 a\n")
        with pytest.raises(GraphFormatError, match="unknown vertex"):
            parse_partition(g, "7 a\n")
        with pytest.raises(GraphFormatError, match="twice"):
            parse_partition(g, "0 a\n0 b\n1 a\n2 a\n")


class TestComponents:
    def test_path_subset(self):
        assert connected_components(path(3), [0, 2]) == [[0], [2]]

    def test_connected_graph(self):
        assert connected_components(complete(5)) == [list(range(5))]

    def test_grid_without_row(self):
        g = grid(6, 6)
        rows_left = [v for v in range(36) if v // 6 != 2]
        comps = connected_components(g, rows_left)
        assert comps == [list(range(12)), list(range(18, 36))]

    @given(graphs(max_n=9))
    def test_matches_networkx(self, g):
        h = nx.Graph()
        h.add_nodes_from(range(g.n))
        h.add_edges_from(g.edges)
        expect = sorted(sorted(c) for c in nx.connected_components(h))
        assert connected_components(g) == expect


def _separates(g: Graph, u: int, v: int, cut) -> bool:
    keep = [x for x in range(g.n) if x not in cut]
    h = g.subgraph_without_edge(u, v) if g.has_edge(u, v) else g
    return all(not (u in c and v in c) for c in connected_components(h, keep))


def _max_disjoint_paths(g: Graph, u: int, v: int) -> int:
    """Internally vertex-disjoint u-v paths by exhaustive path packing (u-v edge excluded)."""
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(e for e in g.edges if set(e) != {u, v})
    paths = [tuple(p[1:-1]) for p in nx.all_simple_paths(h, u, v)]
    best = 0

    def pack(i, used, count):
        nonlocal best
        best = max(best, count)
        if count + len(paths) - i <= best:
            return
        for j in range(i, len(paths)):
            inner = set(paths[j])
            if not inner & used:
                pack(j + 1, used | inner, count + 1)

    pack(0, frozenset(), 0)
    return best


class TestSeparator:
    def test_path(self):
        assert min_vertex_separator(path(3), 0, 2) == [1]

    def test_triangle_edge_removed(self):
        assert min_vertex_separator(complete(3), 0, 1) == [2]

    def test_k4(self):
        sep = min_vertex_separator(complete(4), 0, 1)
        assert sep == [2, 3]
        # no single vertex separates a from b once the edge is gone
        assert not any(_separates(complete(4), 0, 1, {w}) for w in (2, 3))

    def test_disconnected_pair(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        assert min_vertex_separator(g, 0, 3) == []

    def test_same_vertex(self):
        with pytest.raises(ValueError):
            min_vertex_separator(path(2), 1, 1)

    @settings(max_examples=80, deadline=None)
    @given(graphs(min_n=2, max_n=8), st.data())
    def test_menger(self, g, data):
        u, v = data.draw(st.lists(st.integers(0, g.n - 1), min_size=2, max_size=2, unique=True))
        sep = min_vertex_separator(g, u, v)
        assert u not in sep and v not in sep
        assert _separates(g, u, v, set(sep))
        assert len(sep) == _max_disjoint_paths(g, u, v)
        assert len(sep) <= min(g.degree(u), g.degree(v))

    def test_minimum_by_subset_enumeration(self):
        g = from_nx(nx.petersen_graph())
        for u, v in [(0, 1), (0, 7), (3, 9)]:
            sep = min_vertex_separator(g, u, v)
            others = [x for x in range(g.n) if x not in (u, v)]
            smaller = any(
                _separates(g, u, v, set(c))
                for r in range(len(sep))
                for c in itertools.combinations(others, r)
            )
            assert not smaller and _separates(g, u, v, set(sep))

    def test_karate_degree_bound(self):
        g = load("karate")
        for u in range(g.n):
            for v in range(u + 1, g.n):
                assert len(min_vertex_separator(g, u, v)) <= min(g.degree(u), g.degree(v))
