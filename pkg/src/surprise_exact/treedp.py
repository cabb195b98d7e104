"""Surprise optimisation on trees and forests by edge-deletion dynamic programming.

On a tree every optimal cluster is connected, so a clustering with c
clusters deletes exactly c - 1 edges.  For unit vertex weights the number of
intracluster pairs after deleting k edges is (sum of squared component sizes
- n) / 2, and minimising that sum for every k at once is a knapsack-style
merge over children.

Tables are dense int64 arrays indexed ``[k, nu]`` and sized by the subtree,
with ``INF`` marking unreachable entries.  Ties prefer keeping the edge to
the child, then the smallest ``l`` (edges deleted on the parent side).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Clustering, Graph, connected_components
from .surprise import SurpriseValue, surprise_of

INF = np.int64(1) << np.int64(50)

_KEEP, _CUT = 1, 2


class NotAForestError(ValueError):
    pass


@dataclass
class _Merge:
    """Backpointers for one child merge: F^u_i from F^u_{i-1} and the child table."""

    child: int
    case: np.ndarray     # _KEEP / _CUT / 0 (unreachable)
    left_k: np.ndarray   # l: deletions inside T^u_{i-1}
    left_nu: np.ndarray  # mu: size of u's component inside T^u_{i-1}


@dataclass
class DPTable:
    """All DP tables of a rooted tree.

    ``prefix[u][i]`` is F^u_i as a ``(k, nu)`` array (i = 0 is u alone);
    ``full[u]`` is F^u(k, nu) and ``best[u]`` the marginal F^u(k).
    """

    tree: Graph
    root: int
    children: list[list[int]]
    prefix: list[list[np.ndarray]]
    merges: list[list[_Merge]]
    best: list[np.ndarray]
    best_nu: list[np.ndarray]

    def full(self, u: int) -> np.ndarray:
        return self.prefix[u][-1]

    def f_root(self) -> list[int]:
        """F^r(k) for k = 0..m."""
        return [int(x) for x in self.best[self.root]]

    def components(self, k: int) -> list[list[int]]:
        """Components of an optimal k-deletion, reconstructed from backpointers."""
        if not 0 <= k < len(self.best[self.root]):
            raise ValueError(f"k = {k} outside 0..{len(self.best[self.root]) - 1}")
        label = [-1] * self.tree.n
        comps: list[list[int]] = []

        def new_component() -> int:
            comps.append([])
            return len(comps) - 1

        # explicit stack of (node, prefix index, k, nu, component id)
        stack = [(self.root, len(self.children[self.root]), k, int(self.best_nu[self.root][k]), new_component())]
        while stack:
            u, i, kk, nu, cid = stack.pop()
            if i == 0:
                label[u] = cid
                comps[cid].append(u)
                continue
            mg = self.merges[u][i - 1]
            case = int(mg.case[kk, nu])
            l, mu = int(mg.left_k[kk, nu]), int(mg.left_nu[kk, nu])
            c = mg.child
            if case == _KEEP:
                stack.append((c, len(self.children[c]), kk - l, nu - mu, cid))
            elif case == _CUT:
                j = kk - l - 1
                stack.append((c, len(self.children[c]), j, int(self.best_nu[c][j]), new_component()))
            else:
                raise AssertionError("reconstruction reached an unreachable table entry")
            stack.append((u, i - 1, l, mu, cid))
        return [sorted(cm) for cm in comps]


def _rooted(t: Graph, root: int) -> tuple[list[list[int]], list[int]]:
    """Children lists and a preorder of the tree rooted at ``root``."""
    children: list[list[int]] = [[] for _ in range(t.n)]
    seen = [False] * t.n
    seen[root] = True
    order = [root]
    for u in order:
        for w in t.adjacency[u]:
            if not seen[w]:
                seen[w] = True
                children[u].append(w)
                order.append(w)
    return children, order


def _merge(a: np.ndarray, b: np.ndarray, b_best: np.ndarray):
    """Combine u's prefix table ``a`` with child table ``b``.

    Keep case: C[l + j, mu + nu'] = A[l, mu] + B[j, nu'] + 2 mu nu'.
    Cut case: C[l + j + 1, mu] = A[l, mu] + F^child(j).
    """
    ka, sa = a.shape[0] - 1, a.shape[1] - 1
    kb, sb = b.shape[0] - 1, b.shape[1] - 1
    shape = (ka + kb + 2, sa + sb + 1)
    c = np.full(shape, INF, dtype=np.int64)
    case = np.zeros(shape, dtype=np.int8)
    left_k = np.zeros(shape, dtype=np.int32)
    left_nu = np.zeros(shape, dtype=np.int32)

    nu_b = np.arange(sb + 1, dtype=np.int64)
    finite_b = b < INF
    for l, mu in zip(*np.nonzero(a < INF)):
        l, mu = int(l), int(mu)
        cand = np.where(finite_b, a[l, mu] + b + 2 * mu * nu_b[None, :], INF)
        view = c[l:l + kb + 1, mu:mu + sb + 1]
        better = cand < view
        view[better] = cand[better]
        case[l:l + kb + 1, mu:mu + sb + 1][better] = _KEEP
        left_k[l:l + kb + 1, mu:mu + sb + 1][better] = l
        left_nu[l:l + kb + 1, mu:mu + sb + 1][better] = mu

    finite_a = a < INF
    for j in range(kb + 1):
        if b_best[j] >= INF:
            continue
        for l in range(ka + 1):
            cand = np.where(finite_a[l], a[l] + b_best[j], INF)
            row = c[l + j + 1, :sa + 1]
            better = cand < row
            row[better] = cand[better]
            case[l + j + 1, :sa + 1][better] = _CUT
            left_k[l + j + 1, :sa + 1][better] = l
            left_nu[l + j + 1, :sa + 1][better] = np.nonzero(better)[0]
    return c, case, left_k, left_nu


def macp_tree(t: Graph, root: int = 0) -> DPTable:
    """Minimum sum of squared component sizes of ``t`` after deleting k edges, for every k."""
    if t.n == 0 or t.m != t.n - 1 or len(connected_components(t)) != 1:
        raise NotAForestError("macp_tree needs a connected acyclic graph")
    if not 0 <= root < t.n:
        raise ValueError(f"root {root} outside 0..{t.n - 1}")
    children, order = _rooted(t, root)
    n = t.n
    prefix: list[list[np.ndarray]] = [[] for _ in range(n)]
    merges: list[list[_Merge]] = [[] for _ in range(n)]
    best: list[np.ndarray] = [None] * n
    best_nu: list[np.ndarray] = [None] * n
    for u in reversed(order):
        a = np.full((1, 2), INF, dtype=np.int64)
        a[0, 1] = 1
        tabs = [a]
        for c in children[u]:
            a, case, lk, ln = _merge(a, prefix[c][-1], best[c])
            tabs.append(a)
            merges[u].append(_Merge(c, case, lk, ln))
        prefix[u] = tabs
        best_nu[u] = np.argmin(a, axis=1)
        best[u] = a[np.arange(a.shape[0]), best_nu[u]]
    return DPTable(t, root, children, prefix, merges, best, best_nu)


def _component_graph(g: Graph, comp: list[int]) -> tuple[Graph, list[int]]:
    index = {v: i for i, v in enumerate(comp)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index]
    return Graph.from_edges(len(comp), edges), comp


def forest_tables(g: Graph) -> tuple[list[int], list[tuple[DPTable, list[int]]], list[list[int]]]:
    """F(k) of the whole forest by min-plus convolution over its trees.

    Returns ``(F, tables, split)`` where ``split[k]`` gives the deletions per tree.
    """
    if not g.is_forest():
        raise NotAForestError("graph contains a cycle")
    tables = []
    total = [0]
    split: list[list[int]] = [[]]
    for comp in connected_components(g):
        sub, verts = _component_graph(g, comp)
        tab = macp_tree(sub, 0)
        f = tab.f_root()
        tables.append((tab, verts))
        new = [None] * (len(total) + len(f) - 1)
        new_split: list[list[int] | None] = [None] * len(new)
        for k1, x in enumerate(total):
            for k2, y in enumerate(f):
                if new[k1 + k2] is None or x + y < new[k1 + k2]:
                    new[k1 + k2] = x + y
                    new_split[k1 + k2] = split[k1] + [k2]
        total, split = new, new_split
    return total, tables, split


def surprise_optimal_forest(g: Graph, digits: int = 15) -> tuple[Clustering, SurpriseValue]:
    """Surprise-optimal clustering of a forest; ties go to the fewest deleted edges."""
    f, tables, split = forest_tables(g)
    best_k, best_s = None, None
    for k, fk in enumerate(f):
        i_p = (fk - g.n) // 2
        s = surprise_of(g.p, g.m, i_p, g.m - k, digits)
        if best_s is None or s < best_s:
            best_k, best_s = k, s
    clusters = []
    for (tab, verts), kk in zip(tables, split[best_k]):
        clusters.extend([verts[v] for v in cm] for cm in tab.components(kk))
    return Clustering.from_clusters(g, clusters), best_s


def surprise_optimal_tree(t: Graph, digits: int = 15) -> tuple[Clustering, SurpriseValue]:
    """Surprise-optimal clustering of a tree."""
    if t.m != t.n - 1 or not t.is_forest():
        raise NotAForestError("surprise_optimal_tree needs a tree")
    return surprise_optimal_forest(t, digits)
