"""Christofides-style tree-plus-matching algorithm for the s-t path problem,
with a per-instance certificate of the LP-based bounds.

The certificate records the quantities the analysis chains together: the
tree bound c(H) <= c(x*), the two matching bounds
c(M) <= (c(x*)+c(s,t))/2 and c(M) <= c(x*)-c(s,t), and the final ratio
against the path relaxation optimum, which stays below 5/3.  A violated
bound falsifies the implementation, not the analysis, so it aborts the run
with the instance attached instead of passing silently.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .combinat import (EdgeMultiset, euler_path, min_perfect_matching, mst,
                       shortcut, tree_path, walk_cost, wrong_parity_set)
from .instance import Instance, to_document
from .lpcore import FractionalSolution, solve_hk_path
from .params import DEFAULT_SOLVER, SolverConfig

BOUND_TOL = 1e-7


class CertificateViolation(RuntimeError):
    """A lemma bound failed; carries the offending instance for replay."""

    def __init__(self, message: str, inst: Instance,
                 cert: "HoogeveenCertificate") -> None:
        doc = json.dumps(to_document(inst))
        super().__init__(f"{message}\ncertificate={cert}\ninstance={doc}")
        self.instance = inst
        self.certificate = cert


@dataclass(frozen=True)
class HoogeveenCertificate:
    lp_value: float
    tree_cost: float
    matching_cost: float
    st_cost: float
    bound_h2: float
    bound_h3: float
    alg_cost: float
    ratio: float
    alpha: float

    def violations(self, tol: float = BOUND_TOL) -> list[str]:
        out = []
        scale = max(1.0, abs(self.lp_value))
        if self.tree_cost > self.lp_value + tol * scale:
            out.append("tree bound: c(H) > c(x*)")
        if self.matching_cost > min(self.bound_h2, self.bound_h3) + tol * scale:
            out.append("matching bound: c(M) > min(h2, h3)")
        if self.alg_cost > self.tree_cost + self.matching_cost + tol * scale:
            out.append("output exceeds c(H) + c(M)")
        if self.ratio > 5.0 / 3.0 + tol:
            out.append("ratio exceeds 5/3")
        return out


def run_hoogeveen(inst: Instance, lp: FractionalSolution | None = None,
                  cfg: SolverConfig = DEFAULT_SOLVER
                  ) -> tuple[list[int], HoogeveenCertificate]:
    """Tree, parity-fixing matching, Euler walk, shortcut; plus certificate.

    ``lp`` may carry a pre-computed path-variant solution; it is only read
    for the certificate, the combinatorial pipeline never touches it.
    """
    if lp is None:
        lp = solve_hk_path(inst, cfg)
    tree = mst(inst)
    T = wrong_parity_set(tree, inst.s, inst.t)
    matching = min_perfect_matching(T, inst)
    walk = euler_path(tree.union(matching), inst.s, inst.t)
    path = shortcut(walk, inst.s, inst.t)
    st_cost = float(inst.cost[inst.s, inst.t])
    alg_cost = walk_cost(path, inst)
    cert = HoogeveenCertificate(
        lp_value=lp.value,
        tree_cost=tree.cost(inst),
        matching_cost=matching.cost(inst),
        st_cost=st_cost,
        bound_h2=0.5 * (lp.value + st_cost),
        bound_h3=lp.value - st_cost,
        alg_cost=alg_cost,
        ratio=alg_cost / lp.value if lp.value > 0 else float("nan"),
        alpha=st_cost / lp.value - 1.0 / 3.0 if lp.value > 0 else float("nan"),
    )
    bad = cert.violations()
    if bad:
        raise CertificateViolation("; ".join(bad), inst, cert)
    return path, cert


def certify_lemma_h3_construction(inst: Instance, tree: EdgeMultiset) -> dict:
    """Check the tree-minus-path T-join underlying the second matching bound.

    m_prime = tree minus its s-t path must be a T-join for the wrong-parity
    set, and the matching it dominates must cost no more.
    """
    T = wrong_parity_set(tree, inst.s, inst.t)
    on_path = tree_path(tree, inst.s, inst.t)
    m_prime = tree.copy()
    for u, v in on_path:
        m_prime.remove(u, v)
    is_tjoin = m_prime.odd_degree_vertices() == T
    matching = min_perfect_matching(T, inst)
    path_cost = float(sum(inst.cost[u, v] for u, v in on_path))
    cost_bound_ok = (
        matching.cost(inst) <= m_prime.cost(inst) + BOUND_TOL
        and abs(m_prime.cost(inst) - (tree.cost(inst) - path_cost)) <= BOUND_TOL
    )
    return {"m_prime": m_prime, "is_tjoin": is_tjoin,
            "cost_bound_ok": cost_bound_ok}


def critical_alpha(inst: Instance, sol: FractionalSolution) -> float:
    """Distance of c(s,t)/c(x*) from the critical third."""
    if sol.value <= 0:
        raise ValueError("alpha undefined for zero-cost relaxation optimum")
    return float(inst.cost[inst.s, inst.t]) / sol.value - 1.0 / 3.0
