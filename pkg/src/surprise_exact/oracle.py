"""Brute-force ground truth by exhaustive set-partition enumeration.

Nothing here calls the solvers it is used to check; the only shared code is
the surprise evaluator.
"""

from __future__ import annotations

from typing import Iterator

from .graph import Clustering, Graph
from .surprise import SurpriseValue, surprise_of

MAX_N = 14


class OracleLimitError(ValueError):
    """Instance too large for exhaustive enumeration."""


def _guard(n: int) -> None:
    if n > MAX_N:
        raise OracleLimitError(f"exhaustive enumeration is limited to n <= {MAX_N}, got {n}")


def enumerate_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """All set partitions of ``range(n)`` as restricted-growth strings, in lexicographic order."""
    _guard(n)
    if n == 0:
        yield ()
        return
    a = [0] * n
    # prefix_max[i] = max(a[0..i-1]); a[i] may go up to prefix_max[i] + 1
    prefix_max = [0] * n
    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] == prefix_max[i] + 1:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        top = max(prefix_max[i], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            prefix_max[j] = top


def bell_number(n: int) -> int:
    """Bell number via the Bell triangle."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def _scan(g: Graph, visit) -> None:
    """Depth-first walk over all partitions in restricted-growth order, calling
    ``visit(assignment, i_e, i_p)`` at every leaf with incrementally kept counts."""
    _guard(g.n)
    n = g.n
    adj = g.adjacency_masks()
    a = [0] * n
    members: list[int] = []
    sizes: list[int] = []
    last = n - 1

    def rec(v: int, ie: int, ip: int) -> None:
        av = adj[v]
        if v == last:
            # leaves are visited inline to save one call level per partition
            for c in range(len(sizes)):
                a[v] = c
                visit(a, ie + (av & members[c]).bit_count(), ip + sizes[c])
            a[v] = len(sizes)
            visit(a, ie, ip)
            return
        for c in range(len(sizes)):
            a[v] = c
            mc = members[c]
            members[c] = mc | (1 << v)
            sizes[c] += 1
            rec(v + 1, ie + (av & mc).bit_count(), ip + sizes[c] - 1)
            sizes[c] -= 1
            members[c] = mc
        a[v] = len(sizes)
        members.append(1 << v)
        sizes.append(1)
        rec(v + 1, ie, ip)
        members.pop()
        sizes.pop()

    if n == 0:
        visit(a, 0, 0)
    else:
        rec(0, 0, 0)


def first_occurrences(g: Graph) -> dict[tuple[int, int], tuple[int, tuple[int, ...]]]:
    """Map every attainable ``(i_e, i_p)`` to ``(rank, assignment)`` of the first
    partition in restricted-growth order that attains it."""
    table: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = {}
    counter = [0]

    def visit(a, ie, ip):
        key = (ie, ip)
        if key not in table:
            table[key] = (counter[0], tuple(a))
        counter[0] += 1

    _scan(g, visit)
    return table


def brute_force_surprise_optimum(g: Graph) -> tuple[Clustering, SurpriseValue]:
    """Minimum surprise over all partitions; ties go to the first partition in
    restricted-growth order."""
    table = first_occurrences(g)
    best = min(table.items(), key=lambda kv: (surprise_of(g.p, g.m, kv[0][1], kv[0][0]), kv[1][0]))
    (ie, ip), (_, a) = best
    return Clustering.from_assignment(g, a), surprise_of(g.p, g.m, ip, ie)


def brute_force_minip(g: Graph, k: int, mode: str = "exactly") -> tuple[Clustering, int] | None:
    """Minimum ``i_p`` among partitions with ``i_e == k`` (``mode="exactly"``)
    or ``i_e >= k`` (``mode="at_least"``); ``None`` if no partition qualifies."""
    if mode not in ("exactly", "at_least"):
        raise ValueError(f"unknown mode {mode!r}")
    return minip_from_table(g, first_occurrences(g), k, mode)


def minip_from_table(g: Graph, table, k: int, mode: str) -> tuple[Clustering, int] | None:
    """:func:`brute_force_minip` over a precomputed :func:`first_occurrences` table."""
    ok = (lambda ie: ie == k) if mode == "exactly" else (lambda ie: ie >= k)
    cands = [(ip, rank, a) for (ie, ip), (rank, a) in table.items() if ok(ie)]
    if not cands:
        return None
    ip, _, a = min(cands)
    return Clustering.from_assignment(g, a), ip


def min_gap_from_table(table, k: int) -> int | None:
    """Minimum ``i_p - i_e`` among partitions with ``i_e >= k``."""
    gaps = [ip - ie for (ie, ip) in table if ie >= k]
    return min(gaps) if gaps else None


def all_counts(g: Graph) -> set[tuple[int, int]]:
    """Every attainable ``(i_e, i_p)`` pair."""
    return set(first_occurrences(g))
