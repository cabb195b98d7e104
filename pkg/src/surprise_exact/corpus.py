"""Bundled instances and seeded generators for tests and benchmarks."""

from __future__ import annotations

import random
from importlib import resources

from .graph import Graph, parse_graph

BUNDLED = ("karate", "lesmis")


def load(name: str) -> Graph:
    """A bundled graph (``karate``, ``lesmis``) or a generated one (``grid6``)."""
    if name == "grid6":
        return grid(6, 6)
    if name not in BUNDLED:
        raise KeyError(f"no bundled graph {name!r}; have {', '.join(BUNDLED + ('grid6',))}")
    text = resources.files(__package__).joinpath("data").joinpath(f"{name}.edges").read_text()
    return parse_graph(text)


def grid(rows: int, cols: int) -> Graph:
    """Square lattice; vertex r * cols + c."""
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def random_graph(n: int, prob: float, rng: random.Random) -> Graph:
    """G(n, prob) drawn with ``rng``."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < prob]
    return Graph.from_edges(n, edges)


def random_tree(n: int, rng: random.Random) -> Graph:
    """Uniform labelled tree on ``n`` vertices via a random Pruefer sequence."""
    if n <= 2:
        return Graph.from_edges(n, [(0, 1)] if n == 2 else [])
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = (w for w in range(n) if degree[w] == 1)
    edges.append((u, v))
    return Graph.from_edges(n, edges)


def seeded_random_graphs(count: int, sizes: tuple[int, ...], seed: int) -> list[Graph]:
    """``count`` graphs with n drawn from ``sizes`` and edge density uniform in (0, 1)."""
    rng = random.Random(seed)
    return [random_graph(rng.choice(sizes), rng.random(), rng) for _ in range(count)]
