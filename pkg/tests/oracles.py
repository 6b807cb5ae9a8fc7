"""Independent brute-force oracles used to freeze expected test values.

Everything here is deliberately naive: enumeration and recursion only, no
shared code with the implementations under test.
"""
from __future__ import annotations

import itertools
from math import prod

import numpy as np


def enumerate_spanning_trees(n: int, edges: list[tuple[int, int]]):
    """All spanning trees as sorted edge tuples, by subset enumeration."""
    trees = []
    for subset in itertools.combinations(range(len(edges)), n - 1):
        parent = list(range(n))

        def find(v):
            while parent[v] != v:
                v = parent[v]
            return v

        ok = True
        for i in subset:
            u, v = edges[i]
            ru, rv = find(u), find(v)
            if ru == rv:
                ok = False
                break
            parent[ru] = rv
        if ok:
            trees.append(tuple(sorted(edges[i] for i in subset)))
    return trees


def tree_weight(tree, lam: dict) -> float:
    return prod(lam[e] for e in tree)


def exact_tree_distribution(n: int, edges, lam: dict) -> dict:
    trees = enumerate_spanning_trees(n, list(edges))
    weights = {t: tree_weight(t, lam) for t in trees}
    z = sum(weights.values())
    return {t: w / z for t, w in weights.items()}


def exact_edge_marginals(n: int, edges, lam: dict) -> dict:
    dist = exact_tree_distribution(n, edges, lam)
    out = {e: 0.0 for e in edges}
    for tree, p in dist.items():
        for e in tree:
            out[e] += p
    return out


def brute_min_matching(vertices: list[int], cost: np.ndarray) -> float:
    """Minimum perfect matching by explicit (2m-1)!! pairing recursion."""
    verts = sorted(vertices)

    def rec(rem: tuple[int, ...]) -> float:
        if not rem:
            return 0.0
        first, rest = rem[0], rem[1:]
        best = float("inf")
        for i, other in enumerate(rest):
            sub = rest[:i] + rest[i + 1:]
            best = min(best, cost[first, other] + rec(sub))
        return best

    return rec(tuple(verts))


def brute_min_tjoin(n: int, T: set[int], cost: np.ndarray) -> float:
    """Minimum T-join over all simple edge subsets of the complete graph."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    best = float("inf")
    for mask in range(1 << len(edges)):
        deg = [0] * n
        c = 0.0
        for i, (u, v) in enumerate(edges):
            if mask >> i & 1:
                deg[u] += 1
                deg[v] += 1
                c += cost[u, v]
        if c < best and {v for v in range(n) if deg[v] % 2} == T:
            best = c
    return best


def brute_cuts(n: int, weight: np.ndarray):
    """All proper cuts as (subset frozenset, value), vertex n-1 never in S."""
    out = []
    for mask in range(1, 1 << (n - 1)):
        subset = frozenset(v for v in range(n - 1) if mask >> v & 1)
        value = 0.0
        for u in range(n):
            for v in range(u + 1, n):
                if (u in subset) != (v in subset):
                    value += weight[u, v]
        out.append((subset, value))
    return out


def brute_path_opt(cost: np.ndarray, s: int, t: int) -> float:
    n = cost.shape[0]
    internal = [v for v in range(n) if v not in (s, t)]
    best = float("inf")
    for perm in itertools.permutations(internal):
        order = [s, *perm, t]
        best = min(best, sum(cost[order[i], order[i + 1]]
                             for i in range(n - 1)))
    return best
