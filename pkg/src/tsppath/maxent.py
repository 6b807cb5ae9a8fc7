"""Max-entropy spanning-tree machinery: marginal fitting, exact sampling,
near-minimum-cut catalogs, and the even/good edge classification.

Edge weights lambda define a measure mu(T) proportional to the product of
the tree's weights.  Fitting drives the per-edge marginals below
(1 + nu/n^k) times the requested targets with plain multiplicative updates;
sampling conditions edge by edge, so the draw is exact for the fitted
measure.  Cut catalogs are exhaustive at desk scale, which keeps the
even-edge classification free of approximation on top of the Monte Carlo.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .combinat import EdgeMultiset
from .instance import Instance
from .lpcore import FractionalSolution
from .params import CUT_ENUM_CAP, EFFECTIVE

Edge = tuple[int, int]


class MaxEntError(RuntimeError):
    pass


@dataclass
class MaxEntModel:
    n: int
    edges: tuple[Edge, ...]
    lam: np.ndarray
    target: np.ndarray
    fitted: np.ndarray
    nu: float
    k: int
    iterations: int = 0

    def lam_of(self, u: int, v: int) -> float:
        e = (u, v) if u < v else (v, u)
        return float(self.lam[self.edges.index(e)])

    def slack_bound(self) -> float:
        return 1.0 + self.nu / self.n ** self.k


@dataclass
class CutCatalog:
    n: int
    reference_weight: np.ndarray  # symmetric (n, n) edge weights
    min_cut: float
    delta: float
    cuts: list[frozenset[int]]
    cut_values: list[float]


@dataclass
class GoodEdgeReport:
    edges: tuple[Edge, ...]
    even_probability: dict[Edge, float]
    sample_count: int
    rho_eff: float
    good_edges: set[Edge]
    mass_of_good: float
    seed: int


def _laplacian_inverse(n: int, edges: tuple[Edge, ...],
                       lam: np.ndarray) -> np.ndarray:
    """Inverse of the lambda-weighted Laplacian grounded at vertex n-1.

    Returned as an (n, n) matrix with the grounded row and column zeroed, so
    effective resistances read off as M[u,u] + M[v,v] - 2 M[u,v].
    """
    lap = np.zeros((n, n))
    for (u, v), w in zip(edges, lam):
        lap[u, u] += w
        lap[v, v] += w
        lap[u, v] -= w
        lap[v, u] -= w
    try:
        inv = np.linalg.inv(lap[:-1, :-1])
    except np.linalg.LinAlgError as exc:
        raise MaxEntError("support graph is disconnected") from exc
    out = np.zeros((n, n))
    out[:-1, :-1] = inv
    return out


def _marginals(n: int, edges: tuple[Edge, ...], lam: np.ndarray) -> np.ndarray:
    m = _laplacian_inverse(n, edges, lam)
    p = np.empty(len(edges))
    for i, (u, v) in enumerate(edges):
        r_eff = m[u, u] + m[v, v] - 2.0 * m[u, v]
        p[i] = lam[i] * r_eff
    return p


def tree_marginals(lam: dict[Edge, float], n: int) -> dict[Edge, float]:
    """Edge marginals of the lambda-weighted spanning-tree measure."""
    edges = tuple(sorted(lam))
    lam_vec = np.array([lam[e] for e in edges], dtype=float)
    if (lam_vec <= 0).any():
        raise MaxEntError("lambda weights must be positive")
    p = _marginals(n, edges, lam_vec)
    return {e: float(pe) for e, pe in zip(edges, p)}


def fit_lambda(target: dict[Edge, float], n: int, nu: float = 0.2,
               k: int = 2, iter_cap: int = 100000) -> MaxEntModel:
    """Fit edge weights whose tree marginals respect the one-sided slack.

    Multiplicative fixed point lam_e <- lam_e * (z_e / p_e), damped by
    halving the exponent whenever the residual oscillates upward, until
    max_e p_e / z_e <= 1 + nu/n^k.  Over-coverage below the target is
    allowed; the inequality is one-sided.
    """
    edges = tuple(sorted(e for e, z in target.items() if z > 0))
    z = np.array([target[e] for e in edges], dtype=float)
    if len(edges) < n - 1:
        raise MaxEntError("target support cannot span the graph")
    if (z > 1.0 + 1e-9).any():
        raise MaxEntError("marginal targets must lie in [0, 1]")
    bound = 1.0 + nu / n ** k
    lam = z.copy()
    theta = 1.0
    prev_residual = np.inf
    for it in range(1, iter_cap + 1):
        p = _marginals(n, edges, lam)
        ratio = p / z
        residual = float(ratio.max()) - 1.0
        if residual <= bound - 1.0:
            return MaxEntModel(n=n, edges=edges, lam=lam, target=z, fitted=p,
                               nu=nu, k=k, iterations=it)
        if residual > prev_residual:
            theta = max(theta * 0.5, 1.0 / 64.0)
        prev_residual = residual
        lam = lam * (z / p) ** theta
        lam /= lam.max()  # harmless gauge freedom, keeps numbers tame
    raise MaxEntError(
        f"lambda fit did not converge in {iter_cap} iterations; "
        f"residual max p/z - 1 = {prev_residual:.3e} (bound {bound - 1.0:.3e})")


def sample_tree(model: MaxEntModel, seed: int) -> EdgeMultiset:
    """Draw one spanning tree, exactly, by sequential edge conditioning."""
    rng = np.random.default_rng(seed)
    uniforms = rng.random(len(model.edges))
    eu = np.array([e[0] for e in model.edges], dtype=np.int64)
    ev = np.array([e[1] for e in model.edges], dtype=np.int64)
    idx = kernels.sample_spanning_tree(model.n, eu, ev,
                                       np.asarray(model.lam, dtype=float),
                                       uniforms)
    tree = EdgeMultiset()
    for i in idx:
        tree.add(model.edges[i][0], model.edges[i][1])
    return tree


def near_min_cuts(x: np.ndarray, delta: float, n_cap: int = CUT_ENUM_CAP) -> CutCatalog:
    """Catalog of all cuts within (1+delta) of the minimum, by enumeration."""
    n = x.shape[0]
    if n > n_cap:
        raise MaxEntError(f"cut enumeration capped at n={n_cap}")
    eu, ev, w = [], [], []
    for u in range(n):
        for v in range(u + 1, n):
            if x[u, v] > 0.0:
                eu.append(u)
                ev.append(v)
                w.append(float(x[u, v]))
    values = kernels.cut_values(n, np.array(eu, dtype=np.int64),
                                np.array(ev, dtype=np.int64), np.array(w))
    min_cut = float(values[1:].min())
    threshold = (1.0 + delta) * min_cut
    cuts: list[frozenset[int]] = []
    cut_values_out: list[float] = []
    if delta >= 0.0:
        hits = np.nonzero(values <= threshold + 1e-12)[0]
        for mask in hits.tolist():
            if mask == 0:
                continue
            cuts.append(frozenset(v for v in range(n - 1) if (mask >> v) & 1))
            cut_values_out.append(float(values[mask]))
    return CutCatalog(n=n, reference_weight=x.copy(), min_cut=min_cut,
                      delta=delta, cuts=cuts, cut_values=cut_values_out)


def _cut_edge_matrix(catalog: CutCatalog, edges: tuple[Edge, ...]) -> np.ndarray:
    """Boolean (cuts x edges) incidence: edge crosses the cut."""
    mat = np.zeros((len(catalog.cuts), len(edges)), dtype=bool)
    for ci, subset in enumerate(catalog.cuts):
        for ei, (u, v) in enumerate(edges):
            mat[ci, ei] = (u in subset) != (v in subset)
    return mat


def even_edges(tree_edges: set[Edge] | EdgeMultiset, catalog: CutCatalog,
               candidate_edges: tuple[Edge, ...]) -> set[Edge]:
    """Edges whose every catalog cut crosses the tree an even number of times.

    An empty catalog classifies every candidate as even, vacuously.
    """
    if isinstance(tree_edges, EdgeMultiset):
        tset = set(tree_edges.unique_edges())
    else:
        tset = set(tree_edges)
    if not catalog.cuts:
        return set(candidate_edges)
    cand_mat = _cut_edge_matrix(catalog, candidate_edges)
    tlist = tuple(sorted(tset))
    tree_mat = _cut_edge_matrix(catalog, tlist)
    crossings = tree_mat.sum(axis=1)  # tree edges crossing each cut
    odd_cuts = crossings % 2 == 1
    blocked = cand_mat[odd_cuts].any(axis=0)
    return {e for e, b in zip(candidate_edges, blocked) if not b}


def good_edge_report(x_circuit: np.ndarray, model: MaxEntModel, samples: int,
                     rho_eff: float = EFFECTIVE.rho_eff,
                     delta_eff: float = EFFECTIVE.delta_eff,
                     seed: int = 0) -> GoodEdgeReport:
    """Monte Carlo estimate of per-edge even-probabilities and good mass."""
    if samples < 1:
        raise MaxEntError("need at least one sample")
    catalog = near_min_cuts(x_circuit, delta_eff)
    edges = model.edges
    counts = np.zeros(len(edges))
    cand_mat = _cut_edge_matrix(catalog, edges)
    seeds = np.random.SeedSequence(seed).spawn(samples)
    for i in range(samples):
        rng = np.random.default_rng(seeds[i])
        uniforms = rng.random(len(edges))
        eu = np.array([e[0] for e in edges], dtype=np.int64)
        ev = np.array([e[1] for e in edges], dtype=np.int64)
        idx = kernels.sample_spanning_tree(model.n, eu, ev,
                                           np.asarray(model.lam, dtype=float),
                                           uniforms)
        in_tree = np.zeros(len(edges), dtype=bool)
        in_tree[idx] = True
        if catalog.cuts:
            crossings = cand_mat @ in_tree
            odd = crossings % 2 == 1
            blocked = cand_mat[odd].any(axis=0)
            counts += ~blocked
        else:
            counts += 1
    prob = counts / samples
    good = {e for e, p in zip(edges, prob) if p >= rho_eff}
    mass = float(sum(x_circuit[u, v] for u, v in good))
    return GoodEdgeReport(
        edges=edges,
        even_probability={e: float(p) for e, p in zip(edges, prob)},
        sample_count=samples, rho_eff=rho_eff, good_edges=good,
        mass_of_good=mass, seed=seed)


@dataclass(frozen=True)
class StructureReport:
    case: str  # A1 | A2
    nearly_integral_count: int
    threshold: float


def classify_structure(sol: FractionalSolution, gamma: float,
                       eps2_prime: float) -> StructureReport:
    """Count nearly integral edges; many of them means the A1 branch."""
    n = sol.x.shape[0]
    count = 0
    for u in range(n):
        for v in range(u + 1, n):
            if sol.x[u, v] >= 1.0 - gamma:
                count += 1
    threshold = (1.0 - eps2_prime) * (n - 1)
    case = "A1" if count >= threshold else "A2"
    return StructureReport(case=case, nearly_integral_count=count,
                           threshold=threshold)


def scaled_circuit_target(sol_circuit: FractionalSolution) -> dict[Edge, float]:
    """Marginal targets (1 - 1/n) x for fitting; interior of the tree polytope."""
    n = sol_circuit.x.shape[0]
    scale = 1.0 - 1.0 / n
    return {(u, v): scale * float(sol_circuit.x[u, v])
            for u in range(n) for v in range(u + 1, n)
            if sol_circuit.x[u, v] > 1e-12}
