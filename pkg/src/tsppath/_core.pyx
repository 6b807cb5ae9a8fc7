# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: bitmask DPs, subset-DP matching, tree sampling, cuts.

Mirrors tsppath._pure exactly: same signatures, same tie-breaking, same
uniform-consumption convention in the tree sampler.
"""
import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc

cnp.import_array()

INF = float("inf")


def held_karp_path(cost_in, int s, int t):
    """Exact minimum Hamiltonian s-t path by bitmask dynamic programming."""
    cdef int n = cost_in.shape[0]
    if n == 2:
        return float(cost_in[s, t]), [s, t]
    perm = [v for v in range(n) if v != s] + [s]
    cmat = np.ascontiguousarray(np.asarray(cost_in, dtype=np.float64)[np.ix_(perm, perm)])
    cdef double[:, ::1] c = cmat
    cdef int t_idx = perm.index(t)
    cdef int n1 = n - 1
    cdef long full = (1 << n1) - 1
    dp_arr = np.full(((full + 1), n1), np.inf)
    par_arr = np.full(((full + 1), n1), -1, dtype=np.int8)
    cdef double[:, ::1] dp = dp_arr
    cdef signed char[:, ::1] parent = par_arr
    cdef long mask, nm
    cdef int v, w
    cdef double d, nd
    for v in range(n1):
        dp[1 << v, v] = c[n1, v]
    for mask in range(1, full + 1):
        for v in range(n1):
            if not (mask >> v) & 1:
                continue
            d = dp[mask, v]
            if d == INF:
                continue
            for w in range(n1):
                if (mask >> w) & 1:
                    continue
                nm = mask | (<long>1 << w)
                nd = d + c[v, w]
                if nd < dp[nm, w]:
                    dp[nm, w] = nd
                    parent[nm, w] = <signed char>v
    cdef double value = dp[full, t_idx]
    order = [t_idx]
    mask = full
    v = t_idx
    while parent[mask, v] >= 0:
        w = parent[mask, v]
        mask ^= (<long>1 << v)
        order.append(w)
        v = w
    order.append(n1)
    path = [perm[v] for v in reversed(order)]
    return float(value), path


def held_karp_circuit(cost_in):
    """Exact minimum Hamiltonian circuit; tour reported starting at vertex 0."""
    cdef int n = cost_in.shape[0]
    if n == 2:
        return float(2.0 * cost_in[0, 1]), [0, 1]
    if n == 3:
        return float(cost_in[0, 1] + cost_in[1, 2] + cost_in[0, 2]), [0, 1, 2]
    perm = list(range(1, n)) + [0]
    cmat = np.ascontiguousarray(np.asarray(cost_in, dtype=np.float64)[np.ix_(perm, perm)])
    cdef double[:, ::1] c = cmat
    cdef int n1 = n - 1
    cdef long full = (1 << n1) - 1
    dp_arr = np.full(((full + 1), n1), np.inf)
    par_arr = np.full(((full + 1), n1), -1, dtype=np.int8)
    cdef double[:, ::1] dp = dp_arr
    cdef signed char[:, ::1] parent = par_arr
    cdef long mask, nm
    cdef int v, w
    cdef double d, nd, best
    for v in range(n1):
        dp[1 << v, v] = c[n1, v]
    for mask in range(1, full + 1):
        for v in range(n1):
            if not (mask >> v) & 1:
                continue
            d = dp[mask, v]
            if d == INF:
                continue
            for w in range(n1):
                if (mask >> w) & 1:
                    continue
                nm = mask | (<long>1 << w)
                nd = d + c[v, w]
                if nd < dp[nm, w]:
                    dp[nm, w] = nd
                    parent[nm, w] = <signed char>v
    best = INF
    cdef int bestv = 0
    for v in range(n1):
        if dp[full, v] + c[v, n1] < best:
            best = dp[full, v] + c[v, n1]
            bestv = v
    order = [bestv]
    mask = full
    v = bestv
    while parent[mask, v] >= 0:
        w = parent[mask, v]
        mask ^= (<long>1 << v)
        order.append(w)
        v = w
    tour = [perm[v] for v in reversed(order)]
    return float(best), [0] + tour


def matching_dp(sub_in):
    """Minimum-cost perfect matching on an even set by subset DP."""
    cdef int k = sub_in.shape[0]
    if k == 0:
        return 0.0, []
    if k % 2:
        raise ValueError("odd cardinality")
    submat = np.ascontiguousarray(np.asarray(sub_in, dtype=np.float64))
    cdef double[:, ::1] sub = submat
    cdef long size = (<long>1) << k
    dp_arr = np.full(size, np.inf)
    ch_arr = np.full(size, -1, dtype=np.int32)
    cdef double[::1] dp = dp_arr
    cdef int[::1] choice = ch_arr
    dp[0] = 0.0
    cdef long mask, nm
    cdef int i, j
    cdef double base, val
    for mask in range(size):
        if dp[mask] == INF:
            continue
        i = 0
        while (mask >> i) & 1:
            i += 1
        if i >= k:
            continue
        base = dp[mask]
        for j in range(i + 1, k):
            if (mask >> j) & 1:
                continue
            nm = mask | ((<long>1) << i) | ((<long>1) << j)
            val = base + sub[i, j]
            if val < dp[nm]:
                dp[nm] = val
                choice[nm] = i * k + j
    cdef long fullmask = size - 1
    pairs = []
    mask = fullmask
    cdef int enc
    while mask:
        enc = choice[mask]
        i = enc // k
        j = enc % k
        pairs.append((i, j))
        mask ^= ((<long>1) << i) | ((<long>1) << j)
    pairs.reverse()
    return float(dp[fullmask]), pairs


cdef double _effective_resistance_c(double[:, ::1] weights, int n,
                                    unsigned char* alive, int a, int b,
                                    double* lap, double* rhs) except -1.0:
    """Effective resistance between alive vertices a and b, grounding b.

    ``lap`` and ``rhs`` are caller-provided scratch of size n*n and n.
    Gaussian elimination with partial pivoting over the alive submatrix.
    """
    cdef int k = 0
    cdef int i, j, vi, vj
    cdef int* idx = <int*>malloc(n * sizeof(int))
    if idx == NULL:
        raise MemoryError()
    for i in range(n):
        if alive[i] and i != b:
            idx[k] = i
            k += 1
    cdef int arow = -1
    for i in range(k):
        if idx[i] == a:
            arow = i
            break
    # grounded Laplacian over idx
    cdef double diag
    for i in range(k):
        vi = idx[i]
        diag = 0.0
        for j in range(n):
            if alive[j] and j != vi:
                diag += weights[vi, j]
        for j in range(k):
            vj = idx[j]
            lap[i * k + j] = -weights[vi, vj]
        lap[i * k + i] = diag
        rhs[i] = 0.0
    rhs[arow] = 1.0
    # Gaussian elimination with partial pivoting
    cdef int col, piv, r
    cdef double maxval, factor, tmp
    for col in range(k):
        piv = col
        maxval = lap[col * k + col]
        if maxval < 0:
            maxval = -maxval
        for r in range(col + 1, k):
            tmp = lap[r * k + col]
            if tmp < 0:
                tmp = -tmp
            if tmp > maxval:
                maxval = tmp
                piv = r
        if maxval == 0.0:
            free(idx)
            raise ValueError("singular grounded Laplacian (disconnected support)")
        if piv != col:
            for j in range(k):
                tmp = lap[col * k + j]
                lap[col * k + j] = lap[piv * k + j]
                lap[piv * k + j] = tmp
            tmp = rhs[col]
            rhs[col] = rhs[piv]
            rhs[piv] = tmp
        for r in range(col + 1, k):
            factor = lap[r * k + col] / lap[col * k + col]
            if factor != 0.0:
                for j in range(col, k):
                    lap[r * k + j] -= factor * lap[col * k + j]
                rhs[r] -= factor * rhs[col]
    # back substitution
    for col in range(k - 1, -1, -1):
        tmp = rhs[col]
        for j in range(col + 1, k):
            tmp -= lap[col * k + j] * rhs[j]
        rhs[col] = tmp / lap[col * k + col]
    tmp = rhs[arow]
    free(idx)
    return tmp


def sample_spanning_tree(int n, eu_in, ev_in, lam_in, uniforms_in):
    """One spanning tree by sequential edge conditioning (chain rule exact).

    uniforms[i] is consumed only when edge i is actually tested, i.e. when
    its endpoints are still in different components.
    """
    eu_arr = np.ascontiguousarray(np.asarray(eu_in, dtype=np.int64))
    ev_arr = np.ascontiguousarray(np.asarray(ev_in, dtype=np.int64))
    lam_arr = np.ascontiguousarray(np.asarray(lam_in, dtype=np.float64))
    uni_arr = np.ascontiguousarray(np.asarray(uniforms_in, dtype=np.float64))
    cdef long[::1] eu = eu_arr
    cdef long[::1] ev = ev_arr
    cdef double[::1] lam = lam_arr
    cdef double[::1] uni = uni_arr
    cdef int m = eu.shape[0]
    weights_arr = np.zeros((n, n))
    cdef double[:, ::1] weights = weights_arr
    cdef int i, u, v, ru, rv, j
    for i in range(m):
        weights[eu[i], ev[i]] += lam[i]
        weights[ev[i], eu[i]] += lam[i]
    cdef int* comp = <int*>malloc(n * sizeof(int))
    cdef unsigned char* alive = <unsigned char*>malloc(n)
    cdef double* lap = <double*>malloc(n * n * sizeof(double))
    cdef double* rhs = <double*>malloc(n * sizeof(double))
    if comp == NULL or alive == NULL or lap == NULL or rhs == NULL:
        raise MemoryError()
    for i in range(n):
        comp[i] = i
        alive[i] = 1
    chosen = []
    cdef int picked = 0
    cdef double r_eff, p
    try:
        for i in range(m):
            if picked == n - 1:
                break
            ru = <int>eu[i]
            while comp[ru] != ru:
                comp[ru] = comp[comp[ru]]
                ru = comp[ru]
            rv = <int>ev[i]
            while comp[rv] != rv:
                comp[rv] = comp[comp[rv]]
                rv = comp[rv]
            if ru == rv:
                continue
            r_eff = _effective_resistance_c(weights, n, alive, ru, rv, lap, rhs)
            p = lam[i] * r_eff
            if p < 0.0:
                p = 0.0
            if p > 1.0:
                p = 1.0
            if uni[i] < p:
                chosen.append(i)
                picked += 1
                for j in range(n):
                    weights[ru, j] += weights[rv, j]
                    weights[j, ru] += weights[j, rv]
                for j in range(n):
                    weights[rv, j] = 0.0
                    weights[j, rv] = 0.0
                weights[ru, ru] = 0.0
                comp[rv] = ru
                alive[rv] = 0
            else:
                weights[ru, rv] -= lam[i]
                weights[rv, ru] -= lam[i]
    finally:
        free(comp)
        free(alive)
        free(lap)
        free(rhs)
    if picked != n - 1:
        raise RuntimeError("support disconnected, no spanning tree sampled")
    return chosen


def cut_values(int n, eu_in, ev_in, w_in):
    """Weights of all proper bipartition cuts, indexed as in the pure twin."""
    eu_arr = np.ascontiguousarray(np.asarray(eu_in, dtype=np.int64))
    ev_arr = np.ascontiguousarray(np.asarray(ev_in, dtype=np.int64))
    w_arr = np.ascontiguousarray(np.asarray(w_in, dtype=np.float64))
    cdef long[::1] eu = eu_arr
    cdef long[::1] ev = ev_arr
    cdef double[::1] w = w_arr
    cdef int m = eu.shape[0]
    cdef long total = (<long>1) << (n - 1)
    values_arr = np.zeros(total)
    cdef double[::1] values = values_arr
    cdef long mask
    cdef int i, bu, bv
    cdef double acc
    for mask in range(1, total):
        acc = 0.0
        for i in range(m):
            bu = <int>((mask >> eu[i]) & 1) if eu[i] < n - 1 else 0
            bv = <int>((mask >> ev[i]) & 1) if ev[i] < n - 1 else 0
            if bu != bv:
                acc += w[i]
        values[mask] = acc
    values[0] = INF
    return values_arr
