"""Simple undirected graphs, clusterings, file formats and vertex separators."""

from __future__ import annotations

import io
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO


class GraphFormatError(ValueError):
    """Malformed graph or partition input. Carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``edges`` is the strictly sorted list of pairs ``(u, v)`` with ``u < v``;
    ``adjacency[v]`` is the sorted neighbour tuple of ``v``.  ``labels`` maps
    dense ids back to the labels read from input.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)
    labels: tuple[str, ...] = field(repr=False)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[str] | None = None,
    ) -> "Graph":
        if n < 1:
            raise ValueError("a graph needs at least one vertex")
        seen = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise ValueError(f"duplicate edge ({e[0]}, {e[1]})")
            seen.add(e)
        canon = tuple(sorted(seen))
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in canon:
            nbrs[u].append(v)
            nbrs[v].append(u)
        adjacency = tuple(tuple(sorted(a)) for a in nbrs)
        if labels is None:
            labels = [str(i) for i in range(n)]
        elif len(labels) != n:
            raise ValueError("labels must name every vertex")
        return cls(n, canon, adjacency, tuple(labels))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def p(self) -> int:
        return self.n * (self.n - 1) // 2

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adjacency[u]
        # adjacency lists are short; bisect would not pay off
        return v in a

    def adjacency_masks(self) -> list[int]:
        """Neighbour sets as integer bitmasks."""
        masks = []
        for a in self.adjacency:
            mask = 0
            for w in a:
                mask |= 1 << w
            masks.append(mask)
        return masks

    def is_complete(self) -> bool:
        return self.m == self.p

    def is_forest(self) -> bool:
        return self.m == self.n - len(connected_components(self))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        labels = [""] * self.n
        for v, pv in enumerate(perm):
            labels[pv] = self.labels[v]
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges), labels)

    def subgraph_without_edge(self, u: int, v: int) -> "Graph":
        e = (u, v) if u < v else (v, u)
        return Graph.from_edges(self.n, (f for f in self.edges if f != e), self.labels)


@dataclass(frozen=True)
class Clustering:
    """A partition of a graph's vertices with its intracluster counts.

    ``assignment[v]`` is the cluster of ``v``; ids are dense and numbered in
    order of first appearance.  Build instances with :meth:`from_assignment`.
    """

    assignment: tuple[int, ...]
    i_e: int
    i_p: int

    @classmethod
    def from_assignment(cls, g: Graph, assignment: Sequence) -> "Clustering":
        if len(assignment) != g.n:
            raise ValueError(f"assignment covers {len(assignment)} vertices, graph has {g.n}")
        remap: dict = {}
        dense = tuple(remap.setdefault(c, len(remap)) for c in assignment)
        sizes = [0] * len(remap)
        for c in dense:
            sizes[c] += 1
        i_p = sum(s * (s - 1) // 2 for s in sizes)
        i_e = sum(1 for u, v in g.edges if dense[u] == dense[v])
        return cls(dense, i_e, i_p)

    @classmethod
    def from_clusters(cls, g: Graph, clusters: Iterable[Iterable[int]]) -> "Clustering":
        assignment = [-1] * g.n
        for cid, members in enumerate(clusters):
            for v in members:
                if assignment[v] != -1:
                    raise ValueError(f"vertex {v} appears in two clusters")
                assignment[v] = cid
        if -1 in assignment:
            raise ValueError(f"vertex {assignment.index(-1)} is not clustered")
        return cls.from_assignment(g, assignment)

    @classmethod
    def singletons(cls, g: Graph) -> "Clustering":
        return cls(tuple(range(g.n)), 0, 0)

    @property
    def num_clusters(self) -> int:
        return max(self.assignment) + 1 if self.assignment else 0

    def clusters(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_clusters)]
        for v, c in enumerate(self.assignment):
            out[c].append(v)
        return out


# ---------------------------------------------------------------------------
# parsing and writing


def _data_lines(source: TextIO, comment: str):
    for lineno, raw in enumerate(source, start=1):
        line = raw.split(comment, 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_graph(
    source: TextIO | str,
    format: str = "edgelist",
    one_based: bool = False,
    header: bool | None = None,
) -> Graph:
    """Read a graph from an edge list or a METIS file.

    Parameters
    ----------
    source : text stream or str
        Input text; a ``str`` is parsed as file content, not as a path.
    format : {"edgelist", "metis"}
    one_based : bool
        Edge lists only: integer vertex ids start at 1.
    header : bool or None
        Edge lists only: whether the first data line is an ``n m`` header.
        ``None`` detects it (two integers, ``m`` equal to the number of
        following lines, and ``n`` large enough for every id).

    Edge lists whose tokens are not all integers are read with string labels,
    numbered in order of first appearance.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    if format == "edgelist":
        return _parse_edgelist(source, one_based, header)
    if format == "metis":
        return _parse_metis(source)
    raise ValueError(f"unknown graph format {format!r}")


def _parse_edgelist(source: TextIO, one_based: bool, header: bool | None) -> Graph:
    rows = list(_data_lines(source, "#"))
    for lineno, tok in rows:
        if len(tok) != 2:
            raise GraphFormatError(f"expected 'u v', got {len(tok)} fields", lineno)
    declared_n = declared_m = None
    if rows and header is not False:
        lineno, tok = rows[0]
        ints = all(t.lstrip("-").isdigit() for t in tok)
        if header and not ints:
            raise GraphFormatError("header must be 'n m'", lineno)
        if ints:
            hn, hm = int(tok[0]), int(tok[1])
            body = rows[1:]
            if header is None and hm == len(body):
                if not body:
                    header = hn >= 1
                elif all(t.isdigit() for _, r in body for t in r):
                    top = max(int(t) for _, r in body for t in r)
                    header = hn >= top + (0 if one_based else 1)
            if header:
                declared_n, declared_m = hn, hm
                rows = body
    numeric = all(t.isdigit() for _, r in rows for t in r)
    base = 1 if one_based else 0
    edges: list[tuple[int, int]] = []
    lines: list[int] = []
    if numeric:
        for lineno, (a, b) in rows:
            u, v = int(a) - base, int(b) - base
            if u < 0 or v < 0:
                raise GraphFormatError("vertex id below the base index", lineno)
            edges.append((u, v))
            lines.append(lineno)
        top = max((max(e) for e in edges), default=-1)
        n = declared_n if declared_n is not None else top + 1
        if top >= n:
            raise GraphFormatError(f"vertex id {top + base} exceeds declared n={n}")
        labels = [str(i + base) for i in range(n)]
    else:
        if declared_n is not None:
            raise GraphFormatError("a header requires integer vertex ids", 1)
        index: dict[str, int] = {}
        for lineno, (a, b) in rows:
            edges.append((index.setdefault(a, len(index)), index.setdefault(b, len(index))))
            lines.append(lineno)
        n = len(index)
        labels = list(index)
    if declared_m is not None and declared_m != len(edges):
        raise GraphFormatError(f"header declares m={declared_m}, found {len(edges)} edges")
    seen: set[tuple[int, int]] = set()
    for (u, v), lineno in zip(edges, lines):
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {labels[u]}", lineno)
        e = (min(u, v), max(u, v))
        if e in seen:
            raise GraphFormatError(f"duplicate edge {labels[e[0]]} {labels[e[1]]}", lineno)
        seen.add(e)
    if n < 1:
        raise GraphFormatError("graph has no vertices")
    return Graph.from_edges(n, edges, labels)


def _parse_metis(source: TextIO) -> Graph:
    # vertex lines are positional and may be blank (isolated vertex); only
    # comment lines are dropped
    lines = [(i, raw.strip()) for i, raw in enumerate(source, start=1)]
    lines = [(i, s) for i, s in lines if not s.startswith("%")]
    while lines and not lines[0][1]:
        lines.pop(0)
    if not lines:
        raise GraphFormatError("empty METIS file")
    lineno, first = lines[0]
    head = first.split()
    if len(head) not in (2, 3) or not all(t.isdigit() for t in head):
        raise GraphFormatError("METIS header must be 'n m [fmt]'", lineno)
    n, m = int(head[0]), int(head[1])
    if len(head) == 3 and int(head[2]) != 0:
        raise GraphFormatError("weighted METIS graphs are not supported", lineno)
    body = lines[1:]
    while len(body) > n and not body[-1][1]:
        body.pop()
    if len(body) > n:
        raise GraphFormatError(f"more vertex lines than n={n}", body[n][0])
    edges: set[tuple[int, int]] = set()
    directed: set[tuple[int, int]] = set()
    for u, (lineno, text) in enumerate(body):
        for t in text.split():
            if not t.isdigit():
                raise GraphFormatError(f"bad neighbour {t!r}", lineno)
            v = int(t) - 1
            if not 0 <= v < n:
                raise GraphFormatError(f"neighbour {t} outside 1..{n}", lineno)
            if v == u:
                raise GraphFormatError(f"self-loop at vertex {u + 1}", lineno)
            if (u, v) in directed:
                raise GraphFormatError(f"duplicate edge {u + 1} {v + 1}", lineno)
            directed.add((u, v))
            edges.add((min(u, v), max(u, v)))
    for u, v in sorted(directed):
        if (v, u) not in directed:
            raise GraphFormatError(f"edge {u + 1} {v + 1} is not listed symmetrically")
    if len(edges) != m:
        raise GraphFormatError(f"header declares m={m}, found {len(edges)} edges")
    return Graph.from_edges(n, edges, [str(i + 1) for i in range(n)])


def write_edgelist(g: Graph, header: bool = True) -> str:
    """Edge list text using dense ids; parses back to the same graph."""
    out = [f"{g.n} {g.m}"] if header else []
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def write_metis(g: Graph) -> str:
    out = [f"{g.n} {g.m}"]
    for a in g.adjacency:
        out.append(" ".join(str(w + 1) for w in a))
    return "\n".join(out) + "\n"


def write_partition(g: Graph, z: Clustering) -> str:
    return "".join(f"{g.labels[v]} {c}\n" for v, c in enumerate(z.assignment))


def parse_partition(g: Graph, source: TextIO | str) -> Clustering:
    """Read ``label clusterId`` lines; every vertex must be listed once."""
    if isinstance(source, str):
        source = io.StringIO(source)
    index = {lab: v for v, lab in enumerate(g.labels)}
    assignment: list = [None] * g.n
    for lineno, tok in _data_lines(source, "#"):
        if len(tok) != 2:
            raise GraphFormatError("expected 'vertexLabel clusterId'", lineno)
        if tok[0] not in index:
            raise GraphFormatError(f"unknown vertex {tok[0]!r}", lineno)
        v = index[tok[0]]
        if assignment[v] is not None:
            raise GraphFormatError(f"vertex {tok[0]} assigned twice", lineno)
        assignment[v] = tok[1]
    missing = [g.labels[v] for v, c in enumerate(assignment) if c is None]
    if missing:
        raise GraphFormatError(f"vertices without a cluster: {' '.join(missing[:5])}")
    return Clustering.from_assignment(g, assignment)


# ---------------------------------------------------------------------------
# connectivity


def connected_components(g: Graph, subset: Iterable[int] | None = None) -> list[list[int]]:
    """Connected pieces of the subgraph induced by ``subset`` (default: all of V).

    Components are sorted lists, ordered by their smallest vertex.
    """
    allowed = set(range(g.n)) if subset is None else set(subset)
    comps = []
    seen: set[int] = set()
    for s in sorted(allowed):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if w in allowed and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def min_vertex_separator(g: Graph, u: int, v: int) -> list[int]:
    """Minimum set of vertices other than ``u``, ``v`` whose removal disconnects them.

    For adjacent ``u``, ``v`` the edge between them is ignored.  Computed by
    unit-capacity max-flow on the vertex-split digraph with BFS augmenting
    paths over sorted adjacency, so the result is deterministic.  Returns the
    separator closest to ``u`` (the vertices whose split arc leaves the
    residual-reachable side), sorted.
    """
    if u == v:
        raise ValueError("separator endpoints must differ")
    n = g.n
    # split node x into x_in = 2x and x_out = 2x + 1; u and v are not split
    source, sink = 2 * u + 1, 2 * v
    cap: dict[tuple[int, int], int] = {}
    out: list[list[int]] = [[] for _ in range(2 * n)]

    def arc(a: int, b: int, c: int) -> None:
        if (a, b) not in cap:
            out[a].append(b)
            out[b].append(a)
            cap[(a, b)] = 0
            cap.setdefault((b, a), 0)
        cap[(a, b)] += c

    for x in range(n):
        if x != u and x != v:
            arc(2 * x, 2 * x + 1, 1)
    big = n + 1
    for a, b in g.edges:
        if {a, b} == {u, v}:
            continue
        arc(2 * a + 1, 2 * b, big)
        arc(2 * b + 1, 2 * a, big)
    for a in out:
        a.sort()

    def bfs_parents() -> dict[int, int] | None:
        parent = {source: source}
        queue = deque([source])
        while queue:
            a = queue.popleft()
            for b in out[a]:
                if b not in parent and cap[(a, b)] > 0:
                    parent[b] = a
                    if b == sink:
                        return parent
                    queue.append(b)
        return None

    while True:
        parent = bfs_parents()
        if parent is None:
            break
        b = sink
        while b != source:
            a = parent[b]
            cap[(a, b)] -= 1
            cap[(b, a)] += 1
            b = a

    reach = {source}
    queue = deque([source])
    while queue:
        a = queue.popleft()
        for b in out[a]:
            if b not in reach and cap[(a, b)] > 0:
                reach.add(b)
                queue.append(b)
    return sorted(x for x in range(n) if x not in (u, v) and 2 * x in reach and 2 * x + 1 not in reach)
