"""Combined algorithm for unit-weight graphical metrics with case dispatch.

Near the critical point c(s,t) = c(x*)/3 the tree-plus-matching analysis is
tight, so the pipeline switches strategy there: with many nearly integral
edges it builds the tour skeleton out of them (Case A1, with a T-join dual
certificate), otherwise it samples a max-entropy tree on the lifted circuit
solution and toggles the (s,t) edge to restore path parity (Case A2).  Away
from the critical window it falls back to the tree-plus-matching pipeline
(Case B).  With the verbatim constants the window is about 1e-52 wide, so
the default behavior is the fallback; experiments widen the window
explicitly and the trace records what actually ran.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import maxent
from .combinat import (EdgeMultiset, euler_path, min_tjoin, shortcut,
                       spanning_tree_with_forced, walk_cost,
                       wrong_parity_set)
from .hoogeveen import critical_alpha, run_hoogeveen
from .instance import Instance, to_document
from .lpcore import (FractionalSolution, TJoinDualReport, lift_to_circuit,
                     solve_hk_path, tjoin_dual_check)
from .params import ANALYSIS, DEFAULT_SOLVER, SolverConfig

Edge = tuple[int, int]


class GPathError(RuntimeError):
    pass


@dataclass(frozen=True)
class Alg2Params:
    sigma_l: float = ANALYSIS.sigma_l
    sigma_u: float = ANALYSIS.sigma_u
    gamma: float = ANALYSIS.gamma
    eps2_prime: float = ANALYSIS.eps2_prime
    nu: float = ANALYSIS.nu
    k: int = ANALYSIS.k
    seed: int = 0


@dataclass
class Alg2Trace:
    case_taken: str  # A1 | A2 | B
    alpha: float
    lp_value: float
    tree_cost: float
    tjoin_cost: float
    st_toggled: str | None  # removed | added | None
    final_cost: float
    ratio: float
    graphical: bool
    nearly_integral_count: int | None
    params: Alg2Params

    def violations(self, tol: float = 1e-7) -> list[str]:
        out = []
        if self.ratio > 5.0 / 3.0 + tol:
            out.append("ratio exceeds 5/3")
        return out


@dataclass
class CaseA1Result:
    path: list[int]
    cost: float
    tree: EdgeMultiset
    forced_edges: list[Edge]
    spanning_subgraph: EdgeMultiset
    tjoin_cost: float
    y_certificate: TJoinDualReport
    cost_bound: float  # (3/(2(1-gamma)) + 2 eps2' + 2 gamma) c(x*)


@dataclass
class CaseA2Result:
    path: list[int]
    cost: float
    st_toggled: str  # removed | added
    tree: EdgeMultiset
    tree_cost: float
    tjoin_cost: float


def _nearly_integral_edges(sol: FractionalSolution, gamma: float) -> list[Edge]:
    n = sol.x.shape[0]
    return [(u, v) for u in range(n) for v in range(u + 1, n)
            if sol.x[u, v] >= 1.0 - gamma]


def case_a1(inst: Instance, sol: FractionalSolution, gamma: float,
            eps2_prime: float) -> CaseA1Result:
    """Skeleton from the nearly integral edges plus cheapest augmentation.

    The spanning subgraph keeps every nearly integral edge (cycles among
    them included); the tree extracted from it prefers those edges, so each
    such cycle loses exactly one edge.  The emitted y vector witnesses the
    T-join cost bound through the dual polyhedron.
    """
    forced = _nearly_integral_edges(sol, gamma)
    degree: dict[int, int] = {}
    for u, v in forced:
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
    offenders = [v for v, d in degree.items() if d > 2]
    if offenders:
        raise GPathError(
            f"nearly integral edges are not disjoint paths/cycles at {offenders}; "
            "the relaxation solution cannot be feasible")
    # F' = forced edges + cheapest connecting augmentation
    f_prime_tree = spanning_tree_with_forced(inst, forced)
    f_prime = EdgeMultiset(forced)
    for u, v in f_prime_tree.unique_edges():
        if f_prime.multiplicity(u, v) == 0:
            f_prime.add(u, v)
    # spanning tree inside F', preferring forced edges
    tree = spanning_tree_with_forced(inst, forced,
                                     allowed=f_prime.unique_edges())
    T = wrong_parity_set(tree, inst.s, inst.t)
    join = min_tjoin(T, inst)
    walk = euler_path(tree.union(join), inst.s, inst.t)
    path = shortcut(walk, inst.s, inst.t)
    cost = walk_cost(path, inst)
    # Lemma-style dual vector: 1 off the forced part of the tree, x* off the
    # tree, x*/(2(1-gamma)) on the forced part of the tree.
    n = inst.n
    y = np.zeros((n, n))
    in_tree = set(tree.unique_edges())
    forced_in_tree = in_tree & set(forced)
    for u in range(n):
        for v in range(u + 1, n):
            e = (u, v)
            if e in forced_in_tree:
                val = sol.x[u, v] / (2.0 * (1.0 - gamma))
            elif e in in_tree:
                val = 1.0
            else:
                val = sol.x[u, v]
            y[u, v] = y[v, u] = val
    certificate = tjoin_dual_check(y, T, inst)
    bound = (3.0 / (2.0 * (1.0 - gamma)) + 2.0 * eps2_prime + 2.0 * gamma) * sol.value
    return CaseA1Result(path=path, cost=cost, tree=tree, forced_edges=forced,
                        spanning_subgraph=f_prime, tjoin_cost=join.cost(inst),
                        y_certificate=certificate, cost_bound=bound)


def case_a2(inst: Instance, sol: FractionalSolution, model: maxent.MaxEntModel,
            seed: int) -> CaseA2Result:
    """Sampled tree plus T-join, then one (s,t) toggle to fix path parity."""
    tree = maxent.sample_tree(model, seed)
    T = tree.odd_degree_vertices()
    join = min_tjoin(T, inst)
    eulerian = tree.union(join)  # all degrees even
    if (inst.s, inst.t) in eulerian or (inst.t, inst.s) in eulerian:
        eulerian.remove(inst.s, inst.t)
        toggled = "removed"
    else:
        eulerian.add(inst.s, inst.t)
        toggled = "added"
    odd = eulerian.odd_degree_vertices()
    if odd != frozenset({inst.s, inst.t}):
        raise GPathError(f"parity after toggle is {sorted(odd)}, not {{s, t}}")
    if not eulerian.is_connected_on(set(range(inst.n))):
        raise GPathError("internal error: toggled multigraph disconnected")
    walk = euler_path(eulerian, inst.s, inst.t)
    path = shortcut(walk, inst.s, inst.t)
    return CaseA2Result(path=path, cost=walk_cost(path, inst),
                        st_toggled=toggled, tree=tree,
                        tree_cost=tree.cost(inst), tjoin_cost=join.cost(inst))


def run_algorithm2(inst: Instance, params: Alg2Params | None = None,
                   lp: FractionalSolution | None = None,
                   cfg: SolverConfig = DEFAULT_SOLVER
                   ) -> tuple[list[int], Alg2Trace]:
    """Dispatch on the critical window, run the chosen case, emit a trace."""
    if params is None:
        params = Alg2Params()
    if lp is None:
        lp = solve_hk_path(inst, cfg)
    alpha = critical_alpha(inst, lp)
    in_window = -params.sigma_l <= alpha <= params.sigma_u
    nearly = None
    if in_window:
        structure = maxent.classify_structure(lp, params.gamma, params.eps2_prime)
        nearly = structure.nearly_integral_count
        if structure.case == "A1":
            res = case_a1(inst, lp, params.gamma, params.eps2_prime)
            trace = Alg2Trace(case_taken="A1", alpha=alpha, lp_value=lp.value,
                              tree_cost=res.tree.cost(inst),
                              tjoin_cost=res.tjoin_cost, st_toggled=None,
                              final_cost=res.cost,
                              ratio=res.cost / lp.value,
                              graphical=inst.is_graphical,
                              nearly_integral_count=nearly, params=params)
            path = res.path
        else:
            circuit = lift_to_circuit(lp, inst)
            target = maxent.scaled_circuit_target(circuit)
            model = maxent.fit_lambda(target, inst.n, nu=params.nu, k=params.k)
            res2 = case_a2(inst, lp, model, params.seed)
            trace = Alg2Trace(case_taken="A2", alpha=alpha, lp_value=lp.value,
                              tree_cost=res2.tree_cost,
                              tjoin_cost=res2.tjoin_cost,
                              st_toggled=res2.st_toggled,
                              final_cost=res2.cost,
                              ratio=res2.cost / lp.value,
                              graphical=inst.is_graphical,
                              nearly_integral_count=nearly, params=params)
            path = res2.path
    else:
        path, cert = run_hoogeveen(inst, lp=lp, cfg=cfg)
        trace = Alg2Trace(case_taken="B", alpha=alpha, lp_value=lp.value,
                          tree_cost=cert.tree_cost,
                          tjoin_cost=cert.matching_cost, st_toggled=None,
                          final_cost=cert.alg_cost, ratio=cert.ratio,
                          graphical=inst.is_graphical,
                          nearly_integral_count=None, params=params)
    bad = trace.violations()
    if bad:
        raise GPathError("; ".join(bad) + "; instance="
                         + json.dumps(to_document(inst)))
    return path, trace
