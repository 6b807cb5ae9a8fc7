"""Held-Karp relaxations by cutting planes over a dense primal simplex.

Both variants are solved over the full edge set of the complete graph,
starting from the degree equalities plus all singleton cuts, adding at most
three violated cuts per separation round.  Separation is exact: a minimum
s-t cut (max-flow) covers the >=1 family of the path variant and a global
minimum cut (Stoer-Wagner, with s and t merged for the path variant) covers
the >=2 family.  No external solver is involved, which keeps runs
deterministic.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .instance import Instance
from .params import DEFAULT_SOLVER, TJOIN_DUAL_CAP, SolverConfig

Edge = tuple[int, int]


class LPError(RuntimeError):
    pass


@dataclass
class FractionalSolution:
    """Nonnegative edge vector with its value and the tight cut families."""

    variant: str  # path | circuit
    x: np.ndarray  # symmetric (n, n)
    value: float
    tight_cuts: list[frozenset[int]] = field(default_factory=list)

    def edge_value(self, u: int, v: int) -> float:
        return float(self.x[u, v])

    def support(self, tol: float = 1e-9) -> list[Edge]:
        n = self.x.shape[0]
        return [(u, v) for u in range(n) for v in range(u + 1, n)
                if self.x[u, v] > tol]

    def degrees(self) -> np.ndarray:
        return self.x.sum(axis=1)

    def to_document(self) -> dict:
        return {
            "variant": self.variant,
            "value": self.value,
            "edges": [[u, v, float(self.x[u, v])] for u, v in self.support()],
            "tight_cuts": [sorted(c) for c in self.tight_cuts],
        }


@dataclass(frozen=True)
class CutConstraint:
    subset: frozenset[int]
    required: float
    lhs: float

    @property
    def violation(self) -> float:
        return self.required - self.lhs


@dataclass(frozen=True)
class TJoinDualReport:
    feasible: bool
    worst_cut: frozenset[int]
    worst_value: float


# ---------------------------------------------------------------- simplex

class SimplexError(LPError):
    pass


def _pivot(tab: np.ndarray, costrow: np.ndarray, basis: list[int],
           row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    colvals = tab[:, col].copy()
    colvals[row] = 0.0
    tab -= np.outer(colvals, tab[row])
    costrow -= costrow[col] * tab[row]
    basis[row] = col


def _run_simplex(tab: np.ndarray, costrow: np.ndarray, basis: list[int],
                 cfg: SolverConfig, itercap: int) -> None:
    """Iterate pivots until optimal; Bland's rule after a degenerate stall."""
    bland = False
    stall = 0
    last_obj = costrow[-1]
    for _ in range(itercap):
        body = costrow[:-1]
        if bland:
            cand = np.nonzero(body < -cfg.pivot_tol)[0]
            if cand.size == 0:
                return
            col = int(cand[0])
        else:
            col = int(body.argmin())
            if body[col] >= -cfg.pivot_tol:
                return
        colv = tab[:, col]
        rhs = tab[:, -1]
        row = -1
        best = np.inf
        bestvar = np.inf
        for r in range(tab.shape[0]):
            if colv[r] > cfg.pivot_tol:
                ratio = rhs[r] / colv[r]
                if ratio < best - 1e-12 or (ratio < best + 1e-12 and basis[r] < bestvar):
                    best = ratio
                    bestvar = basis[r]
                    row = r
        if row < 0:
            raise SimplexError("LP is unbounded")
        _pivot(tab, costrow, basis, row, col)
        if costrow[-1] > last_obj - 1e-12:
            stall += 1
            if stall >= cfg.degeneracy_window:
                bland = True
        else:
            stall = 0
        last_obj = costrow[-1]
    raise SimplexError("simplex iteration cap exceeded")


def simplex_solve(c: np.ndarray, a_eq: np.ndarray, b_eq: np.ndarray,
                  a_ge: np.ndarray, b_ge: np.ndarray,
                  cfg: SolverConfig = DEFAULT_SOLVER) -> tuple[np.ndarray, float]:
    """min c.x  s.t.  a_eq x = b_eq,  a_ge x >= b_ge,  x >= 0.

    Dense two-phase primal simplex with Dantzig pricing and a Bland's-rule
    fallback on degeneracy.  Returns (x, value).
    """
    n_eq = len(b_eq)
    n_ge = len(b_ge)
    nx = len(c)
    # standard form: surplus variables for the >= rows
    A = np.zeros((n_eq + n_ge, nx + n_ge))
    rhs = np.zeros(n_eq + n_ge)
    if n_eq:
        A[:n_eq, :nx] = a_eq
        rhs[:n_eq] = b_eq
    if n_ge:
        A[n_eq:, :nx] = a_ge
        A[n_eq:, nx:] = -np.eye(n_ge)
        rhs[n_eq:] = b_ge
    flip = rhs < 0
    A[flip] *= -1.0
    rhs[flip] *= -1.0

    m, ntot = A.shape
    # phase 1: artificial basis
    tab = np.hstack([A, np.eye(m), rhs[:, None]])
    basis = list(range(ntot, ntot + m))
    cost1 = np.zeros(ntot + m + 1)
    cost1[ntot:ntot + m] = 1.0
    costrow = cost1 - tab.sum(axis=0)
    costrow[ntot:ntot + m] = 0.0
    costrow[-1] = -tab[:, -1].sum()
    itercap = 200 + 50 * (m + ntot)
    _run_simplex(tab, costrow, basis, cfg, itercap)
    if -costrow[-1] > 1e-7:
        raise LPError("infeasible LP (phase 1 left artificial residue)")
    # drive remaining artificials out of the basis, drop redundant rows
    keep_rows = []
    for r in range(m):
        if basis[r] >= ntot:
            piv = next((j for j in range(ntot) if abs(tab[r, j]) > 1e-9), None)
            if piv is None:
                continue  # redundant row
            _pivot(tab, costrow, basis, r, piv)
        keep_rows.append(r)
    tab = np.ascontiguousarray(tab[keep_rows][:, list(range(ntot)) + [ntot + m]])
    basis = [basis[r] for r in keep_rows]
    # phase 2
    cfull = np.zeros(ntot + 1)
    cfull[:nx] = c
    costrow = cfull.copy()
    for r, bv in enumerate(basis):
        if cfull[bv] != 0.0:
            costrow -= cfull[bv] * tab[r]
    # costrow[-1] now holds -objective; basic columns get exact zeros
    for bv in basis:
        costrow[bv] = 0.0
    _run_simplex(tab, costrow, basis, cfg, itercap)
    x = np.zeros(ntot)
    for r, bv in enumerate(basis):
        x[bv] = tab[r, -1]
    return x[:nx], float(c @ x[:nx])


# ------------------------------------------------------------- separation

def _maxflow_mincut(n: int, cap: np.ndarray, s: int, t: int,
                    eps: float = 1e-11) -> tuple[float, frozenset[int]]:
    """Edmonds-Karp on the undirected capacity matrix; returns (value, source side)."""
    res = cap.astype(float).copy()
    flow = 0.0
    while True:
        prev = np.full(n, -1)
        prev[s] = s
        q = deque([s])
        while q and prev[t] < 0:
            u = q.popleft()
            for v in np.nonzero(res[u] > eps)[0]:
                if prev[v] < 0:
                    prev[v] = u
                    q.append(v)
        if prev[t] < 0:
            break
        bottleneck = np.inf
        v = t
        while v != s:
            u = prev[v]
            bottleneck = min(bottleneck, res[u, v])
            v = u
        v = t
        while v != s:
            u = prev[v]
            res[u, v] -= bottleneck
            res[v, u] += bottleneck
            v = u
        flow += bottleneck
    side = {s}
    q = deque([s])
    while q:
        u = q.popleft()
        for v in np.nonzero(res[u] > eps)[0]:
            if v not in side:
                side.add(int(v))
                q.append(int(v))
    return flow, frozenset(side)


def _stoer_wagner_cuts(n: int, w: np.ndarray) -> list[tuple[float, frozenset[int]]]:
    """All cut-of-the-phase candidates of Stoer-Wagner (global min cut included)."""
    if n < 2:
        return []
    W = w.astype(float).copy()
    groups: list[set[int]] = [{v} for v in range(n)]
    active = list(range(n))
    cuts: list[tuple[float, frozenset[int]]] = []
    while len(active) > 1:
        order = [active[0]]
        weights = {v: W[active[0], v] for v in active[1:]}
        rest = set(active[1:])
        while rest:
            nxt = max(sorted(rest), key=lambda v: weights[v])
            cuts_weight = weights[nxt]
            order.append(nxt)
            rest.discard(nxt)
            for v in rest:
                weights[v] += W[nxt, v]
        last = order[-1]
        cuts.append((cuts_weight, frozenset(groups[last])))
        prev = order[-2]
        # merge last into prev
        groups[prev] = groups[prev] | groups[last]
        W[prev, :] += W[last, :]
        W[:, prev] += W[:, last]
        W[prev, prev] = 0.0
        active.remove(last)
    return cuts


def separate_cuts(x: np.ndarray, variant: str, inst: Instance,
                  tol: float = 1e-7) -> list[CutConstraint]:
    """Violated cut constraints of the given variant, most violated first.

    Path variant: the minimum s-t cut checks the >=1 family and a global
    minimum cut with s and t merged checks the >=2 family.  Circuit variant:
    a global minimum cut checks the >=2 family.
    """
    n = inst.n
    found: dict[frozenset[int], CutConstraint] = {}

    def consider(subset: frozenset[int], lhs: float) -> None:
        if not subset or len(subset) >= n:
            return
        if variant == "path":
            inside = len(subset & {inst.s, inst.t})
            required = 1.0 if inside == 1 else 2.0
        else:
            required = 2.0
        if lhs < required - tol:
            key = subset if len(subset) <= n - len(subset) else \
                frozenset(range(n)) - subset
            cur = found.get(key)
            if cur is None or lhs < cur.lhs:
                found[key] = CutConstraint(subset=subset, required=required, lhs=lhs)

    if variant == "path":
        value, side = _maxflow_mincut(n, x, inst.s, inst.t)
        consider(side, value)
        # merge t into s, global min cut over the remaining n-1 nodes
        if n > 2:
            order = [v for v in range(n) if v != inst.t]
            pos = {v: i for i, v in enumerate(order)}
            Wm = x[np.ix_(order, order)].copy()
            Wm[pos[inst.s], :] += x[inst.t, order]
            Wm[:, pos[inst.s]] += x[order, inst.t]
            Wm[pos[inst.s], pos[inst.s]] = 0.0
            for cut_value, grp in _stoer_wagner_cuts(n - 1, Wm):
                subset = set()
                for gi in grp:
                    v = order[gi]
                    subset.add(v)
                    if v == inst.s:
                        subset.add(inst.t)
                consider(frozenset(subset), cut_value)
    else:
        for cut_value, grp in _stoer_wagner_cuts(n, x):
            consider(frozenset(grp), cut_value)
    out = sorted(found.values(), key=lambda c: (-c.violation, sorted(c.subset)))
    return out


# ------------------------------------------------------ cutting-plane solve

def _cut_row(n: int, edges: list[Edge], subset: frozenset[int]) -> np.ndarray:
    row = np.zeros(len(edges))
    for i, (u, v) in enumerate(edges):
        if (u in subset) != (v in subset):
            row[i] = 1.0
    return row


def _solve_variant(inst: Instance, variant: str,
                   cfg: SolverConfig) -> FractionalSolution:
    n = inst.n
    edges = inst.edges()
    c = np.array([inst.cost[u, v] for u, v in edges])
    a_eq = np.zeros((n, len(edges)))
    b_eq = np.zeros(n)
    for i, (u, v) in enumerate(edges):
        a_eq[u, i] = 1.0
        a_eq[v, i] = 1.0
    for v in range(n):
        if variant == "path" and v in (inst.s, inst.t):
            b_eq[v] = 1.0
        else:
            b_eq[v] = 2.0

    def required(subset: frozenset[int]) -> float:
        if variant == "path" and len(subset & {inst.s, inst.t}) == 1:
            return 1.0
        return 2.0

    cut_sets: list[frozenset[int]] = [frozenset([v]) for v in range(n)]
    a_ge_rows = [_cut_row(n, edges, s) for s in cut_sets]
    b_ge = [required(s) for s in cut_sets]

    xvec = np.zeros(len(edges))
    value = 0.0
    rounds_cap = cfg.round_cap_factor * n * n
    for _ in range(rounds_cap):
        xvec, value = simplex_solve(c, a_eq, b_eq,
                                    np.array(a_ge_rows), np.array(b_ge), cfg)
        xmat = np.zeros((n, n))
        for i, (u, v) in enumerate(edges):
            xmat[u, v] = xmat[v, u] = max(xvec[i], 0.0)
        violated = separate_cuts(xmat, variant, inst, tol=cfg.constraint_tol)
        fresh = [cut for cut in violated if cut.subset not in cut_sets
                 and (frozenset(range(n)) - cut.subset) not in cut_sets]
        if not fresh:
            break
        for cut in fresh[:cfg.cuts_per_round]:
            cut_sets.append(cut.subset)
            a_ge_rows.append(_cut_row(n, edges, cut.subset))
            b_ge.append(required(cut.subset))
    else:
        raise LPError("cutting-plane round cap exceeded")

    xmat = np.zeros((n, n))
    for i, (u, v) in enumerate(edges):
        xmat[u, v] = xmat[v, u] = max(xvec[i], 0.0)
    tight = []
    for subset, row, req in zip(cut_sets, a_ge_rows, b_ge):
        if abs(float(row @ xvec) - req) <= 1e-6:
            tight.append(subset)
    sol = FractionalSolution(variant=variant, x=xmat, value=float(value),
                             tight_cuts=tight)
    _assert_feasible(sol, inst, cfg)
    return sol


def _assert_feasible(sol: FractionalSolution, inst: Instance,
                     cfg: SolverConfig) -> None:
    n = inst.n
    deg = sol.degrees()
    for v in range(n):
        want = 1.0 if (sol.variant == "path" and v in (inst.s, inst.t)) else 2.0
        if abs(deg[v] - want) > cfg.constraint_tol:
            raise LPError(f"degree constraint violated at vertex {v}: {deg[v]}")
    if sol.x.min() < -cfg.constraint_tol:
        raise LPError("negative edge value in LP solution")
    if separate_cuts(sol.x, sol.variant, inst, tol=cfg.constraint_tol):
        raise LPError("separation still finds a violated cut")


def solve_hk_path(inst: Instance,
                  cfg: SolverConfig = DEFAULT_SOLVER) -> FractionalSolution:
    """Optimal solution of the path-variant Held-Karp relaxation."""
    return _solve_variant(inst, "path", cfg)


def solve_hk_circuit(inst: Instance,
                     cfg: SolverConfig = DEFAULT_SOLVER) -> FractionalSolution:
    """Optimal solution of the circuit-variant Held-Karp relaxation."""
    return _solve_variant(inst, "circuit", cfg)


def lift_to_circuit(sol: FractionalSolution, inst: Instance) -> FractionalSolution:
    """Add one unit on the (s,t) edge; path-feasible becomes circuit-feasible.

    Cuts that were tight stay tight: separating cuts gain exactly one unit
    while their requirement moves from 1 to 2.
    """
    if sol.variant != "path":
        raise LPError("lift expects a path-variant solution")
    x = sol.x.copy()
    x[inst.s, inst.t] += 1.0
    x[inst.t, inst.s] += 1.0
    return FractionalSolution(variant="circuit", x=x,
                              value=sol.value + float(inst.cost[inst.s, inst.t]),
                              tight_cuts=list(sol.tight_cuts))


# ------------------------------------------------------- T-join dual check

def tjoin_dual_check(y: np.ndarray, T: frozenset[int] | set[int],
                     inst: Instance, tol: float = 1e-9) -> TJoinDualReport:
    """Feasibility of y for the T-join dual: min odd cut value >= 1.

    Exhaustive over all bipartitions, so capped at n <= 22.
    """
    n = inst.n
    if n > TJOIN_DUAL_CAP:
        raise LPError(f"T-join dual check capped at n={TJOIN_DUAL_CAP}")
    T = frozenset(T)
    if len(T) % 2:
        raise LPError("|T| must be even")
    if not T:
        return TJoinDualReport(True, frozenset(), float("inf"))
    eu, ev, w = [], [], []
    for u in range(n):
        for v in range(u + 1, n):
            if y[u, v] > 0.0:
                eu.append(u)
                ev.append(v)
                w.append(float(y[u, v]))
    values = kernels.cut_values(n, np.array(eu, dtype=np.int64),
                                np.array(ev, dtype=np.int64), np.array(w))
    masks = np.arange(len(values), dtype=np.int64)
    parity = np.zeros(len(values), dtype=np.int64)
    for v in T:
        if v < n - 1:
            parity ^= (masks >> v) & 1
        # vertex n-1 always sits outside S, contributing nothing to |S cap T|
    odd = parity == 1
    odd[0] = False
    if not odd.any():
        return TJoinDualReport(True, frozenset(), float("inf"))
    vals = np.where(odd, values, np.inf)
    best = int(vals.argmin())
    worst_value = float(vals[best])
    subset = frozenset(v for v in range(n - 1) if (best >> v) & 1)
    return TJoinDualReport(feasible=worst_value >= 1.0 - tol,
                           worst_cut=subset, worst_value=worst_value)


# ------------------------------------------------ subtour-form cross-check

def solve_hk_path_subtour(inst: Instance,
                          cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """Path relaxation via the equivalent subtour formulation (small n only).

    Enumerates every x(E(S)) constraint explicitly; used as a cross-check of
    the cut formulation on small instances.
    """
    n = inst.n
    if n > 10:
        raise LPError("subtour cross-check capped at n=10")
    edges = inst.edges()
    c = np.array([inst.cost[u, v] for u, v in edges])
    a_eq = np.zeros((n, len(edges)))
    b_eq = np.zeros(n)
    for i, (u, v) in enumerate(edges):
        a_eq[u, i] = 1.0
        a_eq[v, i] = 1.0
    for v in range(n):
        b_eq[v] = 1.0 if v in (inst.s, inst.t) else 2.0
    rows, rhs = [], []
    for mask in range(1, 1 << n):
        subset = [v for v in range(n) if (mask >> v) & 1]
        if len(subset) < 2 or len(subset) == n:
            continue
        sset = set(subset)
        row = np.zeros(len(edges))
        for i, (u, v) in enumerate(edges):
            if u in sset and v in sset:
                row[i] = -1.0
        if {inst.s, inst.t} <= sset:
            bound = len(subset) - 2
        else:
            bound = len(subset) - 1
        rows.append(row)
        rhs.append(-float(bound))
    _, value = simplex_solve(c, a_eq, b_eq, np.array(rows), np.array(rhs), cfg)
    return float(value)
