"""Combinatorial primitives: MST, matchings, T-joins, Euler paths, shortcuts.

Everything here is deterministic; ties break by lexicographic edge order.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .instance import Instance
from .params import MATCHING_CAP

Edge = tuple[int, int]


class CombinatError(ValueError):
    pass


def _norm(u: int, v: int) -> Edge:
    if u == v:
        raise CombinatError(f"self loop at {u}")
    return (u, v) if u < v else (v, u)


class EdgeMultiset:
    """Multigraph over integer vertices stored as an edge multiset."""

    def __init__(self, edges: Iterable[Edge] = ()) -> None:
        self._edges: Counter[Edge] = Counter()
        for u, v in edges:
            self.add(u, v)

    def add(self, u: int, v: int, mult: int = 1) -> None:
        if mult < 1:
            raise CombinatError("multiplicity must be >= 1")
        self._edges[_norm(u, v)] += mult

    def remove(self, u: int, v: int, mult: int = 1) -> None:
        e = _norm(u, v)
        have = self._edges.get(e, 0)
        if have < mult:
            raise CombinatError(f"edge {e} not present")
        if have == mult:
            del self._edges[e]
        else:
            self._edges[e] -= mult

    def multiplicity(self, u: int, v: int) -> int:
        return self._edges.get(_norm(u, v), 0)

    def unique_edges(self) -> list[Edge]:
        return sorted(self._edges)

    def edges_with_multiplicity(self) -> list[tuple[Edge, int]]:
        return sorted(self._edges.items())

    def edge_sequence(self) -> list[Edge]:
        out: list[Edge] = []
        for e, m in sorted(self._edges.items()):
            out.extend([e] * m)
        return out

    def vertices(self) -> set[int]:
        vs: set[int] = set()
        for u, v in self._edges:
            vs.add(u)
            vs.add(v)
        return vs

    def degree(self, v: int) -> int:
        d = 0
        for (a, b), m in self._edges.items():
            if a == v or b == v:
                d += m
        return d

    def degrees(self) -> dict[int, int]:
        deg: dict[int, int] = defaultdict(int)
        for (a, b), m in self._edges.items():
            deg[a] += m
            deg[b] += m
        return dict(deg)

    def odd_degree_vertices(self) -> frozenset[int]:
        return frozenset(v for v, d in self.degrees().items() if d % 2)

    def cost(self, inst: Instance) -> float:
        return float(sum(inst.cost[u, v] * m for (u, v), m in self._edges.items()))

    def union(self, other: "EdgeMultiset") -> "EdgeMultiset":
        out = self.copy()
        for (u, v), m in other._edges.items():
            out.add(u, v, m)
        return out

    def copy(self) -> "EdgeMultiset":
        out = EdgeMultiset()
        out._edges = Counter(self._edges)
        return out

    def total_multiplicity(self) -> int:
        return sum(self._edges.values())

    def __len__(self) -> int:
        return self.total_multiplicity()

    def __contains__(self, e: Edge) -> bool:
        return _norm(*e) in self._edges

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EdgeMultiset) and self._edges == other._edges

    def __repr__(self) -> str:
        return f"EdgeMultiset({self.edges_with_multiplicity()!r})"

    def is_connected_on(self, vertices: set[int]) -> bool:
        """Connectivity over the given vertex set using present edges."""
        if not vertices:
            return True
        adj: dict[int, set[int]] = defaultdict(set)
        for u, v in self._edges:
            adj[u].add(v)
            adj[v].add(u)
        start = next(iter(vertices))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return vertices <= seen


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def union(self, u: int, v: int) -> bool:
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return False
        self.parent[max(ru, rv)] = min(ru, rv)
        return True


def mst(inst: Instance) -> EdgeMultiset:
    """Minimum spanning tree by Kruskal; ties in lexicographic edge order."""
    order = sorted(inst.edges(), key=lambda e: (inst.cost[e[0], e[1]], e))
    uf = _UnionFind(inst.n)
    tree = EdgeMultiset()
    for u, v in order:
        if uf.union(u, v):
            tree.add(u, v)
            if len(tree) == inst.n - 1:
                break
    return tree


def spanning_tree_with_forced(inst: Instance, forced: Sequence[Edge],
                              allowed: Sequence[Edge] | None = None) -> EdgeMultiset:
    """Kruskal with the forced edges fed first (cycles among them dropped)."""
    uf = _UnionFind(inst.n)
    tree = EdgeMultiset()
    pool = list(forced) + sorted(
        (e for e in (allowed if allowed is not None else inst.edges())),
        key=lambda e: (inst.cost[e[0], e[1]], e))
    for u, v in pool:
        if uf.union(u, v):
            tree.add(u, v)
            if len(tree) == inst.n - 1:
                break
    if len(tree) != inst.n - 1:
        raise CombinatError("edge pool does not connect the vertex set")
    return tree


def wrong_parity_set(tree: EdgeMultiset, s: int, t: int) -> frozenset[int]:
    """Odd-degree internal vertices plus even-degree endpoints of the tree."""
    deg = tree.degrees()
    out = set()
    for v in tree.vertices():
        odd = deg.get(v, 0) % 2 == 1
        if v in (s, t):
            if not odd:
                out.add(v)
        elif odd:
            out.add(v)
    for v in (s, t):
        if v not in deg:
            out.add(v)  # degree zero endpoint counts as even
    return frozenset(out)


def min_perfect_matching(vertices: Iterable[int], inst: Instance) -> EdgeMultiset:
    """Minimum-cost perfect matching on the given vertices (subset DP)."""
    verts = sorted(set(vertices))
    if len(verts) % 2:
        raise CombinatError("matching needs an even vertex set")
    if len(verts) > MATCHING_CAP:
        raise CombinatError(
            f"matching cap exceeded: {len(verts)} > {MATCHING_CAP}")
    if not verts:
        return EdgeMultiset()
    sub = inst.cost[np.ix_(verts, verts)]
    _, pairs = kernels.matching_dp(np.ascontiguousarray(sub, dtype=float))
    out = EdgeMultiset()
    for i, j in pairs:
        out.add(verts[i], verts[j])
    return out


def min_tjoin(T: Iterable[int], inst: Instance) -> EdgeMultiset:
    """Minimum T-join; under a metric a perfect matching on T realizes it."""
    return min_perfect_matching(T, inst)


def tree_path(tree: EdgeMultiset, s: int, t: int) -> list[Edge]:
    """Unique s-t path inside a spanning tree, as an edge list."""
    adj: dict[int, list[int]] = defaultdict(list)
    for u, v in tree.unique_edges():
        adj[u].append(v)
        adj[v].append(u)
    prev: dict[int, int] = {s: s}
    stack = [s]
    while stack:
        u = stack.pop()
        if u == t:
            break
        for w in sorted(adj[u]):
            if w not in prev:
                prev[w] = u
                stack.append(w)
    if t not in prev:
        raise CombinatError("tree does not connect s and t")
    path: list[Edge] = []
    v = t
    while v != s:
        path.append(_norm(prev[v], v))
        v = prev[v]
    return path[::-1]


def euler_path(multigraph: EdgeMultiset, s: int, t: int) -> list[int]:
    """Eulerian s-t walk using every multiedge exactly once (Hierholzer)."""
    if s == t:
        raise CombinatError("distinct endpoints required")
    odd = multigraph.odd_degree_vertices()
    if odd != frozenset({s, t}):
        offender = sorted(odd.symmetric_difference({s, t}))
        raise CombinatError(f"wrong degree parity at vertices {offender}")
    verts = multigraph.vertices() | {s, t}
    if not multigraph.is_connected_on(verts):
        raise CombinatError("multigraph is not connected on its support")
    # adjacency with multiplicities, consumed as we walk
    adj: dict[int, Counter[int]] = defaultdict(Counter)
    for (u, v), m in multigraph.edges_with_multiplicity():
        adj[u][v] += m
        adj[v][u] += m
    stack = [s]
    walk: list[int] = []
    while stack:
        u = stack[-1]
        nbrs = adj[u]
        w = next((x for x in sorted(nbrs) if nbrs[x] > 0), None)
        if w is None:
            walk.append(stack.pop())
        else:
            nbrs[w] -= 1
            adj[w][u] -= 1
            stack.append(w)
    walk.reverse()
    if walk[0] != s or walk[-1] != t:
        raise CombinatError("no Eulerian s-t path")
    return walk


def shortcut(walk: Sequence[int], s: int, t: int) -> list[int]:
    """Shortcut a covering s-t walk to a Hamiltonian path.

    Keeps first occurrences, bypasses every non-final visit of t, appends t
    last; each bypass is a triangle-inequality contraction.
    """
    if walk[0] != s or walk[-1] != t:
        raise CombinatError("walk must start at s and end at t")
    seen = {t}
    path = [s]
    seen.add(s)
    for v in walk[1:]:
        if v not in seen:
            seen.add(v)
            path.append(v)
    path.append(t)
    return path


def walk_cost(seq: Sequence[int], inst: Instance) -> float:
    return float(sum(inst.cost[seq[i], seq[i + 1]] for i in range(len(seq) - 1)))


def is_hamiltonian_path(seq: Sequence[int], inst: Instance) -> bool:
    return (len(seq) == inst.n and seq[0] == inst.s and seq[-1] == inst.t
            and set(seq) == set(range(inst.n)))
