"""Pure numpy implementations of the hot kernels.

Drop-in twins of the compiled extension in ``_core``; selected at import
time by :mod:`tsppath.kernels`.  Same contracts, same results, slower.
"""
from __future__ import annotations

import numpy as np

INF = float("inf")


def held_karp_path(cost: np.ndarray, s: int, t: int) -> tuple[float, list[int]]:
    """Exact minimum Hamiltonian s-t path by bitmask dynamic programming.

    States are (mask, v): cheapest path from s covering {s} plus the masked
    vertices, ending at v.  Vertices are re-indexed so s sits last and masks
    range over the other n-1.
    """
    n = cost.shape[0]
    if n == 2:
        return float(cost[s, t]), [s, t]
    perm = [v for v in range(n) if v != s] + [s]
    c = np.ascontiguousarray(cost[np.ix_(perm, perm)])
    t_idx = perm.index(t)
    n1 = n - 1
    full = (1 << n1) - 1
    dp = np.full((full + 1, n1), INF)
    parent = np.full((full + 1, n1), -1, dtype=np.int8)
    for v in range(n1):
        dp[1 << v, v] = c[n1, v]
    csub = c[:n1, :n1]
    for mask in range(1, full + 1):
        row = dp[mask]
        finite = row < INF
        if not finite.any():
            continue
        # best extension of any path ending inside `mask` to each w
        cand = row[:, None] + csub
        cand[~finite, :] = INF
        best = cand.min(axis=0)
        arg = cand.argmin(axis=0)
        rest = full & ~mask
        w = 0
        r = rest
        while r:
            if r & 1:
                nm = mask | (1 << w)
                if best[w] < dp[nm, w]:
                    dp[nm, w] = best[w]
                    parent[nm, w] = arg[w]
            r >>= 1
            w += 1
    value = dp[full, t_idx]
    order = [t_idx]
    mask, v = full, t_idx
    while parent[mask, v] >= 0:
        pv = int(parent[mask, v])
        mask ^= 1 << v
        order.append(pv)
        v = pv
    order.append(n1)  # s
    path = [perm[v] for v in reversed(order)]
    return float(value), path


def held_karp_circuit(cost: np.ndarray) -> tuple[float, list[int]]:
    """Exact minimum Hamiltonian circuit; tour reported starting at vertex 0."""
    n = cost.shape[0]
    if n == 2:
        return float(2 * cost[0, 1]), [0, 1]
    if n == 3:
        return float(cost[0, 1] + cost[1, 2] + cost[0, 2]), [0, 1, 2]
    perm = list(range(1, n)) + [0]
    c = np.ascontiguousarray(cost[np.ix_(perm, perm)])
    n1 = n - 1
    full = (1 << n1) - 1
    dp = np.full((full + 1, n1), INF)
    parent = np.full((full + 1, n1), -1, dtype=np.int8)
    for v in range(n1):
        dp[1 << v, v] = c[n1, v]
    csub = c[:n1, :n1]
    for mask in range(1, full + 1):
        row = dp[mask]
        finite = row < INF
        if not finite.any():
            continue
        cand = row[:, None] + csub
        cand[~finite, :] = INF
        best = cand.min(axis=0)
        arg = cand.argmin(axis=0)
        rest = full & ~mask
        w = 0
        r = rest
        while r:
            if r & 1:
                nm = mask | (1 << w)
                if best[w] < dp[nm, w]:
                    dp[nm, w] = best[w]
                    parent[nm, w] = arg[w]
            r >>= 1
            w += 1
    totals = dp[full] + c[:n1, n1]
    v = int(totals.argmin())
    value = float(totals[v])
    order = [v]
    mask = full
    while parent[mask, v] >= 0:
        pv = int(parent[mask, v])
        mask ^= 1 << v
        order.append(pv)
        v = pv
    tour = [perm[v] for v in reversed(order)]
    return value, [0] + tour


def matching_dp(sub: np.ndarray) -> tuple[float, list[tuple[int, int]]]:
    """Minimum-cost perfect matching on an even set by subset DP.

    ``sub`` is the cost matrix restricted to the vertices being matched.
    Always pairs the lowest unmatched index, so only even masks are touched.
    """
    k = sub.shape[0]
    if k == 0:
        return 0.0, []
    if k % 2:
        raise ValueError("odd cardinality")
    size = 1 << k
    dp = np.full(size, INF)
    choice = np.full(size, -1, dtype=np.int32)
    dp[0] = 0.0
    for mask in range(size):
        if dp[mask] == INF:
            continue
        # lowest unmatched vertex
        i = 0
        while mask >> i & 1:
            i += 1
        if i >= k:
            continue
        base = dp[mask]
        for j in range(i + 1, k):
            if mask >> j & 1:
                continue
            nm = mask | (1 << i) | (1 << j)
            val = base + sub[i, j]
            if val < dp[nm]:
                dp[nm] = val
                choice[nm] = i * k + j
    fullmask = size - 1
    pairs: list[tuple[int, int]] = []
    mask = fullmask
    while mask:
        enc = int(choice[mask])
        i, j = divmod(enc, k)
        pairs.append((i, j))
        mask ^= (1 << i) | (1 << j)
    return float(dp[fullmask]), pairs[::-1]


def _effective_resistance(weights: np.ndarray, active: list[int],
                          a: int, b: int) -> float:
    """Effective resistance between a and b in the weighted multigraph.

    ``weights`` is a dense symmetric bundle-weight matrix over original
    labels; only rows/cols in ``active`` participate.  Grounds b.
    """
    idx = [v for v in active if v != b]
    pos = {v: i for i, v in enumerate(idx)}
    W = weights[np.ix_(active, active)]
    deg = W.sum(axis=1)
    lap = np.diag(deg) - W
    keep = [i for i, v in enumerate(active) if v != b]
    lg = lap[np.ix_(keep, keep)]
    rhs = np.zeros(len(keep))
    rhs[pos[a]] = 1.0
    sol = np.linalg.solve(lg, rhs)
    return float(sol[pos[a]])


def sample_spanning_tree(n: int, eu: np.ndarray, ev: np.ndarray,
                         lam: np.ndarray, uniforms: np.ndarray) -> list[int]:
    """One spanning tree from the weighted measure by sequential conditioning.

    Walks the edges in the given order; edge i is kept with its conditional
    marginal (its weight times the effective resistance in the current
    contracted graph) tested against uniforms[i].  Exact for the lambda
    measure by the chain rule.
    """
    m = len(eu)
    weights = np.zeros((n, n))
    for i in range(m):
        weights[eu[i], ev[i]] += lam[i]
        weights[ev[i], eu[i]] += lam[i]
    comp = list(range(n))

    def find(v: int) -> int:
        while comp[v] != v:
            comp[v] = comp[comp[v]]
            v = comp[v]
        return v

    active = set(range(n))
    chosen: list[int] = []
    for i in range(m):
        if len(chosen) == n - 1:
            break
        ru, rv = find(int(eu[i])), find(int(ev[i]))
        if ru == rv:
            continue
        r_eff = _effective_resistance(weights, sorted(active), ru, rv)
        p = lam[i] * r_eff
        if uniforms[i] < min(max(p, 0.0), 1.0):
            chosen.append(i)
            # contract rv into ru
            weights[ru, :] += weights[rv, :]
            weights[:, ru] += weights[:, rv]
            weights[rv, :] = 0.0
            weights[:, rv] = 0.0
            weights[ru, ru] = 0.0
            comp[rv] = ru
            active.discard(rv)
        else:
            weights[ru, rv] -= lam[i]
            weights[rv, ru] -= lam[i]
    if len(chosen) != n - 1:
        raise RuntimeError("support disconnected, no spanning tree sampled")
    return chosen


def cut_values(n: int, eu: np.ndarray, ev: np.ndarray,
               w: np.ndarray) -> np.ndarray:
    """Weights of all 2^(n-1)-1 proper bipartition cuts.

    Index mask m in [1, 2^(n-1)) encodes S = set bits of m over vertices
    0..n-2; vertex n-1 stays outside S so each cut appears exactly once.
    Entry 0 is unused and set to +inf.
    """
    total = 1 << (n - 1)
    values = np.zeros(total)
    masks = np.arange(total, dtype=np.int64)
    for i in range(len(eu)):
        if w[i] == 0.0:
            continue
        u, v = int(eu[i]), int(ev[i])
        bu = (masks >> u) & 1 if u < n - 1 else np.zeros_like(masks)
        bv = (masks >> v) & 1 if v < n - 1 else np.zeros_like(masks)
        values += w[i] * (bu != bv)
    values[0] = INF
    return values
